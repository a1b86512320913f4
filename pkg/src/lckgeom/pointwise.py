"""Lazily computed geometric quantities of one field bundle."""

from __future__ import annotations

from functools import cached_property

import numpy as np

from . import jets
from . import lck
from .geometry import FieldBundle, eval_fields, lee_form, nijenhuis_norm
from .riemannian import (codifferential, curvature, levi_civita, ricci_from_christoffel, sharp)

__all__ = ["LocalGeometry", "INTEGRABILITY_THRESHOLD", "local_geometry"]

INTEGRABILITY_THRESHOLD = 1e-8


class LocalGeometry:
    """Cache of Lee form, connections, curvatures and scalar traces for a bundle.

    Every attribute is computed on first access and reused; all values are
    jets over the bundle's variables.
    """

    def __init__(self, bundle: FieldBundle):
        self.bundle = bundle

    @property
    def dim(self) -> int:
        return self.bundle.dim

    @property
    def n(self) -> int:
        return self.bundle.n

    @cached_property
    def lee(self):
        return lee_form(self.bundle)

    @cached_property
    def theta(self):
        return self.lee.jet

    @cached_property
    def conn(self):
        return levi_civita(self.bundle)

    @cached_property
    def curvature(self):
        return curvature(self.conn, self.bundle)

    @cached_property
    def ricci(self):
        if "curv" in self.bundle._cache:
            return self.curvature.ric
        return ricci_from_christoffel(self.conn.gamma, self.dim)

    @cached_property
    def scal(self):
        return jets.einsum("...ab,...ab->...", self.bundle.ginv, self.ricci)

    @cached_property
    def theta_sharp(self):
        return sharp(self.bundle, self.theta)

    @cached_property
    def theta_norm_sq(self):
        return jets.einsum("...a,...a->...", self.theta, self.theta_sharp)

    @cached_property
    def dstar_theta(self):
        return codifferential(self.theta, self.conn, self.bundle)

    @cached_property
    def weyl(self):
        return lck.weyl(self.bundle, self.theta, self.conn)

    @cached_property
    def weyl_curvature(self):
        return lck.weyl_curvature(self.bundle, self.weyl, self.theta, self.conn)

    @cached_property
    def chern(self):
        return lck.chern(self.bundle, self.theta, self.conn)

    @cached_property
    def mu_extended(self):
        n = self.n
        return self.scal + self.dstar_theta + self.theta_norm_sq * ((n - 1) / 2)

    @cached_property
    def mu_chern(self):
        return self.chern.scal + self.dstar_theta * self.n

    @cached_property
    def nijenhuis(self) -> np.ndarray:
        return nijenhuis_norm(self.bundle)

    @cached_property
    def integrable(self) -> bool:
        return bool(np.all(self.nijenhuis <= INTEGRABILITY_THRESHOLD))


def local_geometry(chart, x, order: int = 3, **kwargs) -> LocalGeometry:
    return LocalGeometry(eval_fields(chart, x, order=order, **kwargs))
