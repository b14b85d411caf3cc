"""ETS data model, text notation, forward kinematics and DH conversion.

An ETS is an ordered product of elementary transforms.  Each transform is
a rotation about, or translation along, one coordinate axis, parameterized
either by a constant or by a joint variable (optionally sign-flipped).

Text notation, e.g. ``"rz(q0) tx(1) rz(-q1) rx(90deg)"``:

    ets    := term (whitespace term)* | ""
    term   := axis "(" arg ")"
    axis   := "tx" | "ty" | "tz" | "rx" | "ry" | "rz"   (case-insensitive)
    arg    := number ("deg")? | "-"? "q" uint
    number := decimal or scientific literal

Rotational constants are radians unless suffixed ``deg``; translational
constants are metres and reject ``deg``.  Joint indices must be written
explicitly and cover 0..n-1 with no duplicates.
"""

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ParseError, RangeError
from .liealg import Axis, elem_matrix, rho

__all__ = [
    "ElementaryTransform",
    "ETS",
    "Pose",
    "DhLink",
    "DhTable",
    "parse_ets",
    "format_ets",
    "fkine",
    "link_pose",
    "joint_pose",
    "dh_to_ets",
]


@dataclass(frozen=True)
class ElementaryTransform:
    """One elementary transform: an axis plus a constant or joint parameter.

    Exactly one of ``value`` (constant) and ``jindex`` (joint variable) is
    set.  ``flipped`` negates the joint variable and is only meaningful on
    joints.
    """

    axis: Axis
    value: float | None = None
    jindex: int | None = None
    flipped: bool = False

    def __post_init__(self):
        if (self.value is None) == (self.jindex is None):
            raise ValueError("exactly one of value/jindex must be set")
        if self.value is not None and not math.isfinite(self.value):
            raise ValueError("constant must be finite")
        if self.jindex is not None and self.jindex < 0:
            raise ValueError("joint index must be non-negative")

    @property
    def is_joint(self):
        return self.jindex is not None

    def eta(self, q):
        """Parameter value given the joint vector ``q``."""
        if self.jindex is None:
            return self.value
        qj = q[self.jindex]
        return -qj if self.flipped else qj

    def matrix(self, q=None):
        return elem_matrix(self.axis, self.eta(q))


class ETS:
    """Ordered sequence of elementary transforms with joint bookkeeping.

    Joint indices among the transforms must be exactly 0..n-1, each
    appearing once.  Instances are immutable after construction.
    """

    def __init__(self, transforms=()):
        self._transforms = tuple(transforms)
        jmap = {}
        for pos, et in enumerate(self._transforms):
            if et.is_joint:
                if et.jindex in jmap:
                    raise ValueError(f"duplicate joint index q{et.jindex}")
                jmap[et.jindex] = pos
        if sorted(jmap) != list(range(len(jmap))):
            raise ValueError("joint indices must be contiguous from 0")
        self._jmap = jmap

    @property
    def transforms(self):
        return self._transforms

    @property
    def M(self):
        """Number of elementary transforms."""
        return len(self._transforms)

    @property
    def n(self):
        """Number of joints."""
        return len(self._jmap)

    def joint_position(self, j):
        """Sequence position m_j of the transform holding joint ``j``."""
        if j not in self._jmap:
            raise RangeError(f"no joint q{j}")
        return self._jmap[j]

    def __len__(self):
        return len(self._transforms)

    def __iter__(self):
        return iter(self._transforms)

    def __getitem__(self, i):
        return self._transforms[i]

    def __eq__(self, other):
        if not isinstance(other, ETS):
            return NotImplemented
        return self._transforms == other._transforms

    def __hash__(self):
        return hash(self._transforms)

    def __str__(self):
        return format_ets(self)

    def __repr__(self):
        return f"ETS({format_ets(self)!r})"

    def fkine(self, q):
        return fkine(self, q)

    def check_q(self, q):
        q = np.atleast_1d(np.asarray(q, dtype=float))
        if q.shape != (self.n,):
            raise DimensionMismatch(
                f"expected {self.n} joint coordinates, got {q.shape}"
            )
        return q


class Pose:
    """A pose in SE(3): 4x4 homogeneous transform with validated structure.

    The rotation block must be orthonormal (within 1e-9) with determinant
    +1 and the bottom row must be exactly (0, 0, 0, 1).
    """

    __slots__ = ("A",)

    def __init__(self, A):
        A = np.asarray(A, dtype=float)
        if A.shape != (4, 4):
            raise ValueError("pose must be 4x4")
        if not np.array_equal(A[3], [0.0, 0.0, 0.0, 1.0]):
            raise ValueError("bottom row must be exactly (0, 0, 0, 1)")
        R = A[:3, :3]
        if np.max(np.abs(R.T @ R - np.eye(3))) > 1e-9:
            raise ValueError("rotation block is not orthonormal")
        if abs(np.linalg.det(R) - 1.0) > 1e-9:
            raise ValueError("rotation block must have determinant +1")
        self.A = A

    @property
    def R(self):
        return self.A[:3, :3]

    @property
    def t(self):
        return self.A[:3, 3]

    # n/o/a columns of the rotation (two-axis convention: each is the
    # cross product of the other two).
    @property
    def n(self):
        return self.A[:3, 0]

    @property
    def o(self):
        return self.A[:3, 1]

    @property
    def a(self):
        return self.A[:3, 2]

    def __repr__(self):
        return f"Pose({self.A!r})"


_AXES = {a.value: a for a in Axis}
_NUMBER_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_JOINT_RE = re.compile(r"(-?)q(\d+)$")
_TERM_RE = re.compile(r"([A-Za-z]+)\((.*)\)$")


def parse_ets(text):
    """Parse ETS text notation into an ETS value.

    Raises ParseError (carrying the byte offset of the offending token)
    on malformed terms, ``deg`` applied to a translation, duplicate joint
    indices, or non-contiguous joint indices.
    """
    transforms = []
    for tok in re.finditer(r"\S+", text):
        off = tok.start()
        m = _TERM_RE.fullmatch(tok.group())
        if m is None:
            raise ParseError(f"malformed term {tok.group()!r}", off)
        tag, arg = m.group(1).lower(), m.group(2).strip()
        axis = _AXES.get(tag)
        if axis is None:
            raise ParseError(f"unknown axis tag {m.group(1)!r}", off)
        jm = _JOINT_RE.fullmatch(arg)
        if jm is not None:
            jindex = int(jm.group(2))
            if any(et.is_joint and et.jindex == jindex for et in transforms):
                raise ParseError(f"duplicate joint index q{jindex}", off)
            transforms.append(
                ElementaryTransform(axis, jindex=jindex, flipped=jm.group(1) == "-")
            )
            continue
        deg = False
        num = arg
        if arg.endswith("deg"):
            deg = True
            num = arg[:-3]
        nm = _NUMBER_RE.fullmatch(num)
        if nm is None:
            raise ParseError(f"malformed number {arg!r}", off)
        value = float(num)
        if deg:
            if not axis.is_rotation:
                raise ParseError("'deg' is only valid on rotations", off)
            value = math.radians(value)
        transforms.append(ElementaryTransform(axis, value=value))

    seen = sorted(et.jindex for et in transforms if et.is_joint)
    if seen != list(range(len(seen))):
        raise ParseError("joint indices must be contiguous from 0", 0)
    return ETS(transforms)


def _fmt_const(c):
    # 17 significant digits: enough to round-trip a double exactly.
    return format(c, ".17g")


def format_ets(ets):
    """Canonical lowercase text for an ETS; inverse of parse_ets."""
    parts = []
    for et in ets:
        if et.is_joint:
            arg = f"-q{et.jindex}" if et.flipped else f"q{et.jindex}"
        else:
            arg = _fmt_const(et.value)
        parts.append(f"{et.axis.value}({arg})")
    return " ".join(parts)


def fkine(ets, q):
    """Forward kinematics: the left-to-right product of all transforms."""
    q = ets.check_q(q)
    T = np.eye(4)
    for et in ets:
        T = T @ et.matrix(q)
    return Pose(T)


def link_pose(ets, q, a, b):
    """Pose spanned by the transforms at positions [a, b).

    ``a == b`` yields the identity; ``(0, M)`` equals fkine.
    """
    if not (0 <= a <= b <= ets.M):
        raise RangeError(f"invalid position range [{a}, {b}) for M={ets.M}")
    q = ets.check_q(q)
    T = np.eye(4)
    for et in ets.transforms[a:b]:
        T = T @ et.matrix(q)
    return Pose(T)


def joint_pose(ets, q, j):
    """Pose of joint j's frame: the product of transforms before m_j."""
    return link_pose(ets, q, 0, ets.joint_position(j))


@dataclass(frozen=True)
class DhLink:
    """One Denavit-Hartenberg link row.

    For a revolute link the joint variable is theta and the ``theta``
    field is ignored; for a prismatic link the joint variable is d and
    the ``d`` field is ignored.  ``offset`` is the constant added to the
    joint variable.
    """

    joint_kind: str  # "revolute" | "prismatic"
    theta: float = 0.0
    d: float = 0.0
    a: float = 0.0
    alpha: float = 0.0
    offset: float = 0.0

    def __post_init__(self):
        if self.joint_kind not in ("revolute", "prismatic"):
            raise ValueError(f"bad joint kind {self.joint_kind!r}")


@dataclass(frozen=True)
class DhTable:
    """A DH parameter table in either the standard or modified convention."""

    convention: str  # "standard" | "modified"
    links: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.convention not in ("standard", "modified"):
            raise ValueError(f"bad convention {self.convention!r}")
        object.__setattr__(self, "links", tuple(self.links))
        if not self.links:
            raise ValueError("DH table needs at least one link")


def dh_to_ets(dh):
    """Expand a DH table into the equivalent ETS.

    Standard convention: each link becomes rz(theta) tz(d) tx(a) rx(alpha);
    modified convention: rx(alpha) tx(a) rz(theta) tz(d).  The joint
    variable slot becomes a joint term, preceded by a constant term when
    the offset is nonzero.  Zero-valued constants are omitted.
    """
    transforms = []

    def const(axis, value):
        if value != 0.0:
            transforms.append(ElementaryTransform(axis, value=value))

    for j, link in enumerate(dh.links):
        revolute = link.joint_kind == "revolute"

        def rz_part():
            if revolute:
                const(Axis.RZ, link.offset)
                transforms.append(ElementaryTransform(Axis.RZ, jindex=j))
            else:
                const(Axis.RZ, link.theta)

        def tz_part():
            if revolute:
                const(Axis.TZ, link.d)
            else:
                const(Axis.TZ, link.offset)
                transforms.append(ElementaryTransform(Axis.TZ, jindex=j))

        if dh.convention == "standard":
            rz_part()
            tz_part()
            const(Axis.TX, link.a)
            const(Axis.RX, link.alpha)
        else:
            const(Axis.RX, link.alpha)
            const(Axis.TX, link.a)
            rz_part()
            tz_part()

    return ETS(transforms)
