from dataclasses import dataclass, field

from .numbers import jsonable


@dataclass
class Certificate:
    """Outcome of a check: pass/fail, what was checked, and the first failure with its witness."""

    kind: str
    ok: bool
    checks: list = field(default_factory=list)
    failure: dict = None
    info: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_json(self):
        out = {"kind": self.kind, "status": "pass" if self.ok else "fail", "checks": jsonable(self.checks)}
        if self.failure is not None:
            out["failure"] = jsonable(self.failure)
        if self.info:
            out["info"] = jsonable(self.info)
        return out
