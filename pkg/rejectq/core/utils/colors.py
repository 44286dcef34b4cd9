class Colors:
    """Console styles for experiment panels, result tables and check reports."""

    BOLD = "bold"
    DIM = "dim"
    PARAM = "cyan"
    PANEL = "bold blue"
    PASSED = "bold green"
    FAILED = "bold red"

    @classmethod
    def verdict(cls, passed: bool) -> str:
        """PASS/FAIL markup for a check row."""
        return f"[{cls.PASSED}]PASS[/]" if passed else f"[{cls.FAILED}]FAIL[/]"

    @classmethod
    def rate(cls, value: float, good_above: float = 0.5) -> str:
        """Rate with six decimals, dimmed when it falls below ``good_above``."""
        text = f"{value:.6f}"
        return text if value >= good_above else f"[{cls.DIM}]{text}[/]"
