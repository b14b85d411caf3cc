"""Serial-manipulator kinematics from elementary transform sequences."""

from .checks import run_checks
from .diffkin import (
    accel_twist,
    hessian_fast,
    hessian_fd,
    hessian_naive,
    jacobian_fast,
    jacobian_fd,
    jacobian_naive,
    nmode3,
    partial_pose,
    second_partial_pose,
    velocity_twist,
)
from .errors import (
    DimensionMismatch,
    KinematicsError,
    LimitError,
    NotAugmentedSkew,
    NotSkewSymmetric,
    ParseError,
    RangeError,
    SchemaError,
)
from .ets import (
    DhLink,
    DhTable,
    ElementaryTransform,
    ETS,
    Pose,
    dh_to_ets,
    fkine,
    format_ets,
    joint_pose,
    link_pose,
    parse_ets,
)
from .liealg import (
    Axis,
    elem_matrix,
    generator,
    rho,
    skew3,
    skew6,
    tau,
    vex3,
    vex6,
)
from .robots import RobotModel, bundled_models, load_model

__version__ = "0.1.0"
