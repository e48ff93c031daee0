"""
ERGM parameter specification and its JSON file format.

File format::

    {"n": 20, "betas": [-0.2, 0.1],
     "templates": [{"v": 2, "edges": [[1, 2]]}, "triangle"]}

Templates may be given inline or by library name. The first template must
be the single edge.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple, Union

from ..errors import ConfigError, DomainError
from ..graphs import Template, is_single_edge
from ..utils.config import get_config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ErgmSpec:
    """Parameter vector beta with templates H_1..H_k, H_1 the single edge"""
    betas: Tuple[float, ...]
    templates: Tuple[Template, ...]
    n: Optional[int] = None
    allow_nonpositive: bool = False

    def __post_init__(self):
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        object.__setattr__(self, "templates", tuple(self.templates))
        if not self.templates:
            raise DomainError("A model needs at least the edge template")
        if len(self.betas) != len(self.templates):
            raise DomainError(
                f"{len(self.betas)} parameters given for {len(self.templates)} templates"
            )
        if not is_single_edge(self.templates[0]):
            raise DomainError("The first template must be the single edge")
        for j, template in enumerate(self.templates):
            if template.has_isolated:
                raise DomainError(
                    f"Model template {j + 1} has isolated vertices {template.isolated_vertices}"
                )
        if not self.allow_nonpositive:
            bad = [(j + 1, b) for j, b in enumerate(self.betas[1:], start=1) if b <= 0]
            if bad:
                raise DomainError(
                    f"Parameters beta_j for j>=2 must be positive, got {bad}; "
                    "pass allow_nonpositive to override (disables monotone coupling)"
                )
        if self.n is not None and self.n < 2:
            raise DomainError(f"Host size must be at least 2, got {self.n}")

    @classmethod
    def named(cls, terms: Iterable[Tuple[str, float]], **kwargs) -> "ErgmSpec":
        """Build from (template name, beta) pairs, e.g. [("edge", -0.2), ("triangle", 0.1)]."""
        terms = list(terms)
        return cls(
            tuple(beta for _, beta in terms),
            tuple(Template.from_name(name) for name, _ in terms),
            **kwargs,
        )

    @property
    def k(self) -> int:
        return len(self.betas)

    @property
    def edge_counts(self) -> Tuple[int, ...]:
        return tuple(t.e for t in self.templates)

    @property
    def vertex_counts(self) -> Tuple[int, ...]:
        return tuple(t.v for t in self.templates)

    @property
    def max_vertices(self) -> int:
        return max(self.vertex_counts)

    @property
    def monotone(self) -> bool:
        """True when every beta_j, j >= 2, is nonnegative"""
        return all(b >= 0 for b in self.betas[1:])

    def scales(self, n: int) -> Tuple[float, ...]:
        """beta_j n^(2 - v_j), the weight of |Hom(H_j, G)| in T."""
        return tuple(b * float(n) ** (2 - t.v) for b, t in zip(self.betas, self.templates))

    def resolve_n(self, n: Optional[int]) -> int:
        if n is not None:
            return n
        if self.n is None:
            raise ConfigError("No host size given and the spec file has no 'n'")
        return self.n

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "betas": list(self.betas),
            "templates": [t.to_dict() for t in self.templates],
        }
        if self.n is not None:
            out["n"] = self.n
        if self.allow_nonpositive:
            out["allow_nonpositive"] = True
        return out

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ErgmSpec":
        templates = []
        for entry in data["templates"]:
            if isinstance(entry, str):
                templates.append(Template.from_name(entry))
            else:
                templates.append(Template.of(int(entry["v"]), entry["edges"]))
        config = get_config()
        for template in templates:
            template.check_size(config.template_max_v, config.template_max_e)
        n = data.get("n")
        return cls(
            tuple(data["betas"]),
            tuple(templates),
            n=int(n) if n is not None else None,
            allow_nonpositive=bool(data.get("allow_nonpositive", False)),
        )


def load_spec(path: Union[str, Path]) -> ErgmSpec:
    """
    Load a model from a JSON spec file.

    Raises:
        ConfigError: unreadable file, malformed JSON or an invalid model
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        spec = ErgmSpec.from_dict(data)
    except OSError as e:
        raise ConfigError(f"Cannot read spec file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Spec file {path} is not valid JSON: {e}") from e
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"Spec file {path} is missing or mistypes a field: {e}") from e
    except DomainError as e:
        raise ConfigError(f"Spec file {path} describes an invalid model: {e}") from e
    logger.debug(f"Loaded spec from {path}: betas={spec.betas}")
    return spec
