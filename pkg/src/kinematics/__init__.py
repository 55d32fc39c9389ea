"""Velocity fields, the lambda tensor and gauge parameter families."""

from .kinematics import (
    GaugeParameterSet,
    HarmonicProfile,
    KinematicsError,
    LambdaField,
    ParameterFamily,
    VelocityFamily,
    VelocityField,
    evaluate_parameters,
    lambda_analytic,
    lambda_determinant,
    lambda_error,
    lambda_gradient,
    lambda_numeric,
)

__all__ = [
    "GaugeParameterSet",
    "HarmonicProfile",
    "KinematicsError",
    "LambdaField",
    "ParameterFamily",
    "VelocityFamily",
    "VelocityField",
    "evaluate_parameters",
    "lambda_analytic",
    "lambda_determinant",
    "lambda_error",
    "lambda_gradient",
    "lambda_numeric",
]
