from app.commands import synth, explain, report, render

__all__ = ["synth", "explain", "report", "render"]
