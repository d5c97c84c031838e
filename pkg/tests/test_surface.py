import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qll import surface as sf
from qll.ambient import catalog
from qll.errors import GeometryError
from qll.grids import SphereGrid
from qll.harmonics import real_harmonic_grid


# -- induced_geometry --------------------------------------------------------

def test_euclidean_round_sphere(grid48, euclidean):
    geom = sf.induced_geometry(euclidean, sf.coordinate_sphere(grid48, 2.0))
    assert np.max(np.abs(geom.H - 1.0)) < 1e-10
    assert np.max(geom.traceless_sq) < 1e-12
    assert np.max(np.abs(geom.gauss_curvature - 0.25)) < 1e-9
    assert np.max(np.abs(geom.P)) == 0.0
    assert abs(geom.area - 16.0 * np.pi) < 1e-10


def test_hyperboloid_slice_sphere(grid48, hyperboloid):
    geom = sf.induced_geometry(hyperboloid, sf.coordinate_sphere(grid48, 1.0))
    assert np.max(np.abs(geom.H - 2.0 * np.sqrt(2.0))) < 1e-10
    assert np.max(np.abs(geom.P - 2.0)) < 1e-10
    assert np.max(geom.traceless_sq) < 1e-12


def test_paraboloid_slice_sphere(grid48, paraboloid):
    geom = sf.induced_geometry(paraboloid, sf.coordinate_sphere(grid48, 1.0))
    assert np.max(np.abs(geom.H - 2.0 / np.sqrt(0.75))) < 1e-10
    assert np.max(np.abs(geom.P - 1.0 / np.sqrt(0.75))) < 1e-10


def test_offcenter_sphere_in_euclidean(grid32, euclidean):
    geom = sf.induced_geometry(
        euclidean, sf.coordinate_sphere(grid32, 1.5, center=(0.3, -0.2, 0.7)))
    assert np.max(np.abs(geom.H - 2.0 / 1.5)) < 1e-10
    assert abs(geom.area - 9.0 * np.pi) < 1e-9


def test_mesh_outside_chart_rejected(grid32, paraboloid, schwarzschild):
    from qll.errors import ChartDomainError
    with pytest.raises(ChartDomainError):
        sf.induced_geometry(paraboloid, sf.coordinate_sphere(grid32, 2.5))
    with pytest.raises(ChartDomainError):
        sf.induced_geometry(schwarzschild, sf.coordinate_sphere(grid32, 1.5))


def test_degenerate_mesh_rejected(grid32):
    with pytest.raises(GeometryError):
        sf.SurfaceMesh(grid32, np.zeros((32, 64)), np.zeros(3))
    rad = np.ones((32, 64))
    rad[5, 7] = -1.0
    with pytest.raises(GeometryError):
        sf.SurfaceMesh(grid32, rad, np.zeros(3))


def test_null_expansion_identity(grid32, hyperboloid):
    geom = sf.induced_geometry(hyperboloid, sf.coordinate_sphere(grid32, 0.8))
    lhs = geom.theta_plus * geom.theta_minus
    rhs = 0.5 * (geom.P ** 2 - geom.H ** 2)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


# -- integrate ---------------------------------------------------------------

def test_integrate_constant(grid32, euclidean):
    geom = sf.induced_geometry(euclidean, sf.coordinate_sphere(grid32, 1.0))
    assert abs(sf.integrate(geom, 1.0) - 4.0 * np.pi) < 1e-10


def test_integrate_h_squared(grid32, euclidean):
    geom = sf.induced_geometry(euclidean, sf.coordinate_sphere(grid32, 3.0))
    assert abs(sf.integrate(geom, geom.H ** 2) - 16.0 * np.pi) < 1e-9


@pytest.mark.parametrize("builder", [
    lambda g: sf.coordinate_sphere(g, 1.0),
    lambda g: sf.ellipsoid(g, (1.0, 1.0, 1.2)),
    lambda g: sf.round_sphere_with_harmonics(g, 1.0, [(2, 2, 0.02), (3, 1, 0.01)]),
])
def test_gauss_bonnet(grid48, euclidean, builder):
    geom = sf.induced_geometry(euclidean, builder(grid48))
    assert abs(sf.integrate(geom, geom.gauss_curvature) - 4.0 * np.pi) < 1e-6


def test_quadrature_convergence_ellipsoid(euclidean):
    defects = []
    for (nt, nph) in ((16, 32), (32, 64), (64, 128)):
        grid = SphereGrid(nt, nph)
        geom = sf.induced_geometry(euclidean, sf.ellipsoid(grid, (1.0, 1.0, 1.3)))
        defects.append(abs(sf.integrate(geom, geom.gauss_curvature) - 4.0 * np.pi))
    for coarse, fine in zip(defects, defects[1:]):
        assert fine <= max(coarse / 4.0, 1e-9)


# -- surface calculus --------------------------------------------------------

def test_gradient_and_laplacian_of_constant(grid32, euclidean):
    geom = sf.induced_geometry(euclidean, sf.coordinate_sphere(grid32, 1.0))
    c = np.full((32, 64), 2.5)
    gt, gp = sf.surface_gradient(geom, c)
    assert np.max(np.abs(gt)) < 1e-11
    assert np.max(np.abs(gp)) < 1e-11
    assert np.max(np.abs(sf.surface_laplacian(geom, c))) < 1e-9


def test_laplacian_first_harmonic(grid48, euclidean):
    geom = sf.induced_geometry(euclidean, sf.coordinate_sphere(grid48, 1.0))
    f = geom.X[..., 2]
    assert np.max(np.abs(sf.surface_laplacian(geom, f) + 2.0 * f)) < 1e-6


def test_laplacian_scales_with_radius(grid32, euclidean):
    geom = sf.induced_geometry(euclidean, sf.coordinate_sphere(grid32, 2.0))
    y = real_harmonic_grid(grid32, 2, 0)
    assert np.max(np.abs(sf.surface_laplacian(geom, y) + 1.5 * y)) < 1e-8


def test_tangential_divergence_of_k_slice(grid48, paraboloid):
    geom = sf.induced_geometry(paraboloid, sf.coordinate_sphere(grid48, 1.0))
    V = np.einsum("...ab,...bc,...c->...a", geom.ginv_amb, geom.k_amb, geom.nu)
    assert np.max(np.abs(sf.tangential_divergence(geom, V))) < 1e-8


def test_divergence_of_gradient_is_laplacian(grid48, euclidean):
    geom = sf.induced_geometry(euclidean, sf.coordinate_sphere(grid48, 1.0))
    y = real_harmonic_grid(grid48, 2, 1)
    V = sf.gradient_ambient(geom, y)
    div = sf.tangential_divergence(geom, V)
    lap = sf.surface_laplacian(geom, y)
    assert np.max(np.abs(div - lap)) < 1e-7


def test_normal_component_discarded_in_divergence(grid32, euclidean):
    geom = sf.induced_geometry(euclidean, sf.coordinate_sphere(grid32, 1.0))
    div = sf.tangential_divergence(geom, geom.nu.copy())
    assert np.max(np.abs(div)) < 1e-10


# -- gauss_equation_check ----------------------------------------------------

@pytest.mark.parametrize("name,params,r,tol", [
    ("euclidean", {}, 2.0, 1e-6),
    ("hyperboloid", {"a": 1.0}, 1.0, 1e-6),
    ("schwarzschild", {"m": 1.0}, 4.0, 1e-5),
])
def test_gauss_equation_on_catalog_spheres(grid48, name, params, r, tol):
    space = catalog(name, **params)
    geom = sf.induced_geometry(space, sf.coordinate_sphere(grid48, r))
    assert np.max(np.abs(sf.gauss_equation_check(space, geom))) < tol


def test_gauss_equation_refinement(euclidean):
    errs = []
    for (nt, nph) in ((24, 48), (48, 96)):
        grid = SphereGrid(nt, nph)
        mesh = sf.round_sphere_with_harmonics(grid, 1.0, [(2, 1, 0.03)])
        geom = sf.induced_geometry(euclidean, mesh)
        errs.append(np.max(np.abs(sf.gauss_equation_check(euclidean, geom))))
    assert errs[1] <= max(errs[0] / 4.0, 1e-9)


# -- mesh I/O ----------------------------------------------------------------

def test_mesh_io_roundtrip(tmp_path, grid32):
    mesh = sf.round_sphere_with_harmonics(grid32, 1.3, [(2, -1, 0.04)],
                                          center=(0.1, 0.2, -0.3))
    path = tmp_path / "mesh.txt"
    sf.save_mesh(mesh, path)
    back = sf.load_mesh(path)
    assert np.array_equal(back.radius, mesh.radius)
    assert np.array_equal(back.center, mesh.center)


def test_mesh_io_rejects_truncated(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("16 32 0 0 0\n1.0 2.0\n")
    with pytest.raises(ValueError):
        sf.load_mesh(path)


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_mesh_io_roundtrip_random(tmp_path_factory, seed):
    grid = SphereGrid(8, 16)
    rng = np.random.default_rng(seed)
    mesh = sf.SurfaceMesh(grid, rng.uniform(0.5, 2.0, size=(8, 16)), rng.normal(size=3))
    path = tmp_path_factory.mktemp("io") / "mesh.txt"
    sf.save_mesh(mesh, path)
    back = sf.load_mesh(path, grid)
    assert np.array_equal(back.radius, mesh.radius)


# -- sign conventions --------------------------------------------------------

def test_mean_curvature_sign_convention(grid32, euclidean):
    # shrinking the sphere increases H; outward normal points away from center
    h_small = sf.induced_geometry(euclidean, sf.coordinate_sphere(grid32, 0.5)).H
    h_large = sf.induced_geometry(euclidean, sf.coordinate_sphere(grid32, 2.0)).H
    assert np.all(h_small > h_large)
    geom = sf.induced_geometry(euclidean, sf.coordinate_sphere(grid32, 1.0))
    outward = np.einsum("...a,...a->...", geom.nu, geom.X)
    assert np.all(outward > 0.0)
