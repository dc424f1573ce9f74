"""Tests for the measure service."""

import numpy as np
import pytest

from models.measure import Atom, DensitySpec
from services.geometry_service import GeometryService
from services.measure_service import MeasureService
from utils.errors import AtomOutsideRegionError, InteriorAtomNotPushableError


class TestBuildMeasure:
    """Test cases for build_measure."""

    def setup_method(self):
        self.geometry = GeometryService()
        self.service = MeasureService(self.geometry)
        self.disk = self.geometry.disk(1.0)
        self.grid = self.geometry.build_grid(self.disk, 128)
        self.nm = self.geometry.normalize(self.disk, 2.0)

    def test_uniform_density_has_unit_mass(self):
        """f = 1 integrates harmonic measure to one."""
        measure = self.service.build_measure(self.nm, self.grid, DensitySpec(kind="constant"))

        assert measure.total_mass == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(measure.boundary_weights, measure.harmonic)

    def test_atoms_are_appended_to_the_support(self):
        """Support is the grid followed by the atoms."""
        atoms = [Atom(location=0.0, mass=0.3), Atom(location=1j, mass=0.2)]

        measure = self.service.build_measure(self.nm, self.grid, DensitySpec(kind="constant"), atoms)

        assert measure.total_mass == pytest.approx(1.5, abs=1e-12)
        assert len(measure.support_points) == 130
        assert measure.support_points[-2] == 0.0
        np.testing.assert_allclose(measure.support_weights[-2:], [0.3, 0.2])
        assert measure.positive_support_count == 130

    def test_atom_in_omega_is_rejected(self):
        """Atoms must lie in K."""
        with pytest.raises(AtomOutsideRegionError, match="outside K"):
            self.service.build_measure(self.nm, self.grid, DensitySpec(kind="constant"), [Atom(location=1.5, mass=1.0)])

    @pytest.mark.parametrize("centre", [0.0, 0.5 - 0.25j])
    def test_atom_at_the_centre_of_a_disk_lies_in_k(self, centre):
        """The centre of a disk maps to w = 0, well inside K."""
        disk = self.geometry.disk(1.0, centre)
        nm = self.geometry.normalize(disk, "inf")
        grid = self.geometry.build_grid(disk, 64)

        measure = self.service.build_measure(nm, grid, DensitySpec(kind="constant"), [Atom(location=centre, mass=0.5)])

        assert measure.total_mass == pytest.approx(1.5, abs=1e-12)
        with pytest.raises(InteriorAtomNotPushableError):
            self.service.pushforward_to_circle(nm, measure)

    def test_atom_at_the_centre_of_an_ellipse_lies_in_k(self):
        """The ellipse centre lies inside K."""
        ellipse = self.geometry.ellipse(1.0, 0.25)
        nm = self.geometry.normalize(ellipse, 3.0)
        grid = self.geometry.build_grid(ellipse, 64)

        measure = self.service.build_measure(nm, grid, DensitySpec(kind="constant"), [Atom(location=0.0, mass=0.5)])

        assert measure.atoms[0].location == 0.0


class TestEntropy:
    """Test cases for the entropy integral S(f, z0)."""

    def setup_method(self):
        self.geometry = GeometryService()
        self.service = MeasureService(self.geometry)
        self.disk = self.geometry.disk(1.0)
        self.grid = self.geometry.build_grid(self.disk, 256)

    def test_constant_density(self):
        """S(c, z0) = c."""
        nm = self.geometry.normalize(self.disk, 3.0)

        assert self.service.entropy(nm, self.grid, DensitySpec(kind="constant", c=0.7)) == pytest.approx(0.7)

    def test_jensen_at_infinity(self):
        """S(|z - 2|, inf) = 2 on the unit circle."""
        nm = self.geometry.normalize(self.disk, "inf")

        assert self.service.entropy(nm, self.grid, DensitySpec(kind="abs_linear", a=2.0)) == pytest.approx(2.0, rel=1e-12)

    def test_poisson_integral_at_finite_point(self):
        """S(|z - 2|, 2) = 3/2 on the unit circle."""
        nm = self.geometry.normalize(self.disk, 2.0)

        assert self.service.entropy(nm, self.grid, DensitySpec(kind="abs_linear", a=2.0)) == pytest.approx(1.5, rel=1e-12)

    def test_exp_trig_mean_zero_exponent(self):
        """S(exp(0.4 cos theta), inf) = 1 when the grid parameter is harmonic."""
        nm = self.geometry.normalize(self.disk, "inf")

        assert self.service.entropy(nm, self.grid, DensitySpec(kind="exp_trig", cos=[0.4])) == pytest.approx(1.0)

    def test_vanishing_density_is_zero_entropy(self):
        """A density that underflows everywhere fails the Szego condition."""
        nm = self.geometry.normalize(self.disk, "inf")

        assert self.service.entropy(nm, self.grid, DensitySpec(kind="constant", c=0.0)) == 0.0

    def test_entropy_from_values(self):
        """Geometric mean with respect to the given weights."""
        harmonic = np.array([0.5, 0.5])

        assert self.service.entropy_from_values(harmonic, np.array([1.0, 4.0])) == pytest.approx(2.0)

    @pytest.mark.parametrize("c", [0.01, 2.5, 40.0])
    def test_entropy_is_log_linear(self, c):
        """S(c f) = c S(f) for constants c > 0."""
        ellipse = self.geometry.ellipse(1.0, 0.25)
        grid = self.geometry.build_grid(ellipse, 256)
        nm = self.geometry.normalize(ellipse, 2.5)
        base = DensitySpec(kind="exp_trig", cos=[0.4], sin=[0.1])
        scaled = DensitySpec(kind="exp_trig", cos=[0.4], sin=[0.1], scale=c)

        expected = c * self.service.entropy(nm, grid, base)

        assert self.service.entropy(nm, grid, scaled) == pytest.approx(expected, rel=1e-12)

    def test_atoms_do_not_enter_the_entropy(self):
        """Adding atoms leaves S unchanged."""
        nm = self.geometry.normalize(self.disk, 2.0)
        density = DensitySpec(kind="abs_linear", a=2.0)
        plain = self.service.build_measure(nm, self.grid, density)
        atoms = [Atom(location=0.0, mass=0.3), Atom(location=1j, mass=2.0)]
        loaded = self.service.build_measure(nm, self.grid, density, atoms)

        with_atoms = self.service.entropy_from_values(loaded.harmonic, loaded.density_values)
        without = self.service.entropy_from_values(plain.harmonic, plain.density_values)

        assert with_atoms == without
        assert self.service.entropy(nm, self.grid, density) == pytest.approx(1.5, rel=1e-12)


class TestPushforward:
    """Test cases for pushforward_to_circle."""

    def setup_method(self):
        self.geometry = GeometryService()
        self.service = MeasureService(self.geometry)
        self.ellipse = self.geometry.ellipse(1.0, 0.25)
        self.grid = self.geometry.build_grid(self.ellipse, 64)

    def test_boundary_atom_moves_to_the_circle(self):
        """Boundary atoms map to Phi_{z0} of their preimage."""
        nm = self.geometry.normalize(self.ellipse, 2j)
        atom = Atom(location=self.ellipse.psi(1.0), mass=0.4)
        measure = self.service.build_measure(nm, self.grid, DensitySpec(kind="constant"), [atom])

        circle = self.service.pushforward_to_circle(nm, measure)

        assert circle.on_circle
        assert circle.atoms[0].location == pytest.approx(nm.rotation)
        assert circle.atoms[0].mass == 0.4
        assert circle.grid.offset == pytest.approx(nm.alpha)
        np.testing.assert_allclose(np.abs(circle.grid.nodes), 1.0)
        np.testing.assert_allclose(circle.boundary_weights, measure.boundary_weights)

    def test_interior_atom_is_not_pushable(self):
        """Atoms strictly inside K have no circle image."""
        nm = self.geometry.normalize(self.ellipse, "inf")
        measure = self.service.build_measure(
            nm, self.grid, DensitySpec(kind="constant"), [Atom(location=0.1 + 0.1j, mass=1.0)]
        )

        with pytest.raises(InteriorAtomNotPushableError):
            self.service.pushforward_to_circle(nm, measure)
