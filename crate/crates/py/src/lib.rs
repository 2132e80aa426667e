//! Python bindings for `grassfiber`.

use grassfiber::exactgeom::RationalVector;
use grassfiber::fibers4::{self as f4, ChamberOrbit, FiberKind, TorusElement, TransitionDirection};
use grassfiber::plucker::{GrassmannPoint, ProjectivePoint};
use grassfiber::{acceptance, moment, regularity, Error};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Parse(_) | Error::Unsupported(_) | Error::OutsideChart(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn orbit(name: &str) -> PyResult<ChamberOrbit> {
    name.parse().map_err(py_err)
}

fn rational_point(s: &str) -> PyResult<RationalVector> {
    RationalVector::parse_list(s).map_err(py_err)
}

fn strings(x: &RationalVector) -> Vec<String> {
    x.iter().map(ToString::to_string).collect()
}

fn torus(t: Vec<Complex64>) -> PyResult<TorusElement> {
    TorusElement::new(t).map_err(py_err)
}

/// A point of the Grassmann fiber over the regular value of `orbit`.
#[pyclass(name = "MQ5Point", frozen)]
struct PyMQ5Point(f4::MQ5Point);

#[pymethods]
impl PyMQ5Point {
    /// Reads a point of CP^5; fails unless it lies on the fiber.
    #[new]
    #[pyo3(signature = (coords, orbit = "minus"))]
    fn new(coords: Vec<Complex64>, orbit: &str) -> PyResult<Self> {
        let p = ProjectivePoint::new(coords).map_err(py_err)?;
        Ok(PyMQ5Point(f4::MQ5Point::from_projective(&p, self::orbit(orbit)?).map_err(py_err)?))
    }

    fn coords(&self) -> Vec<Complex64> {
        self.0.coords().to_vec()
    }

    fn orbit(&self) -> &'static str {
        self.0.orbit().label()
    }

    fn moment_residual(&self) -> f64 {
        self.0.moment_residual()
    }

    fn plucker_residual(&self) -> f64 {
        self.0.plucker_residual()
    }

    fn surface_residual(&self) -> f64 {
        self.0.surface_residual()
    }

    /// Chart coordinates `(a1, a2, a3, a4)`.
    fn chart(&self) -> Vec<Complex64> {
        self.0.chart().a.to_vec()
    }

    /// `(f1, f2, f3)` at the chart point.
    fn complete_intersection(&self) -> [f64; 3] {
        let (u, v) = self.0.chart().split();
        f4::complete_intersection_f(&u, &v)
    }

    #[pyo3(signature = (tol = 1e-6))]
    fn jacobian_rank(&self, tol: f64) -> usize {
        let (u, v) = self.0.chart().split();
        f4::jacobian_rank(&u, &v, tol)
    }

    #[pyo3(signature = (tol = 1e-6))]
    fn tangent_dimension(&self, tol: f64) -> usize {
        f4::mq5_tangent_dimension(&self.0, tol)
    }

    /// `(z0, z1, t1, t2, t3)` with `F(z0, z1, t) = self`.
    fn f_preimage(&self) -> PyResult<(Complex64, Complex64, Vec<Complex64>)> {
        let (m, t) = f4::f_preimage(&self.0).map_err(py_err)?;
        Ok((m.z0(), m.z1(), t.phases().to_vec()))
    }

    /// `((z0, z1, z2), (t1, t2))` with `G(z, t) = self`.
    fn g_preimage(&self) -> PyResult<(Vec<Complex64>, Vec<Complex64>)> {
        let (m, t) = f4::g_preimage(&self.0).map_err(py_err)?;
        Ok((m.z().to_vec(), t.phases().to_vec()))
    }

    fn __repr__(&self) -> String {
        format!("MQ5Point({:?}, orbit={})", self.0.coords(), self.0.orbit().label())
    }
}

/// A point of `M^2`, fixed by `(z0, z1)`.
#[pyclass(name = "M2Point", frozen)]
struct PyM2Point(f4::M2Point);

#[pymethods]
impl PyM2Point {
    #[new]
    fn new(z0: Complex64, z1: Complex64) -> PyResult<Self> {
        Ok(PyM2Point(f4::M2Point::new(z0, z1).map_err(py_err)?))
    }

    /// Solves the surface equation for the phases given `|z0|, |z1|`.
    #[staticmethod]
    #[pyo3(signature = (r0, r1, branch = 1))]
    fn sample(r0: f64, r1: f64, branch: i8) -> PyResult<Self> {
        Ok(PyM2Point(f4::m2_sample(r0, r1, branch).map_err(py_err)?))
    }

    #[getter]
    fn z0(&self) -> Complex64 {
        self.0.z0()
    }

    #[getter]
    fn z1(&self) -> Complex64 {
        self.0.z1()
    }

    /// `(z0, z1, |z2|, |z3|, |z4|, |z5|)`.
    fn base(&self) -> Vec<Complex64> {
        self.0.base().to_vec()
    }

    fn surface_residual(&self) -> f64 {
        self.0.surface_residual()
    }

    fn on_circle(&self) -> bool {
        self.0.on_circle()
    }

    /// `p(z) = (z1 |z4| : z0 |z5|)`.
    fn proj_p(&self) -> PyResult<Vec<Complex64>> {
        Ok(f4::proj_p(&self.0.to_m3()).map_err(py_err)?.coords().to_vec())
    }

    /// `F(self, t)` for `t = (t1, t2, t3)`.
    #[pyo3(signature = (t, orbit = "minus"))]
    fn f_param(&self, t: Vec<Complex64>, orbit: &str) -> PyResult<PyMQ5Point> {
        let p = f4::f_param(&self.0, &torus(t)?).map_err(py_err)?;
        Ok(PyMQ5Point(p.with_orbit(self::orbit(orbit)?)))
    }

    fn __repr__(&self) -> String {
        format!("M2Point(z0={}, z1={})", self.0.z0(), self.0.z1())
    }
}

/// `G(z, t)` for a point `z` of `M^3` and `t = (t1, t2)`.
#[pyfunction]
#[pyo3(signature = (z, t, orbit = "minus"))]
fn g_param(z: [Complex64; 3], t: Vec<Complex64>, orbit: &str) -> PyResult<PyMQ5Point> {
    let m = f4::M3Point::new(z[0], z[1], z[2]).map_err(py_err)?;
    let p = f4::g_param(&m, &torus(t)?).map_err(py_err)?;
    Ok(PyMQ5Point(p.with_orbit(self::orbit(orbit)?)))
}

/// `h(z, t4, t5)` as coordinates of CP^5, for `z` on the sphere `|z|^2 = 1/3`.
#[pyfunction]
#[pyo3(signature = (z, t, orbit = "minus"))]
fn h_param(z: [Complex64; 3], t: Vec<Complex64>, orbit: &str) -> PyResult<Vec<Complex64>> {
    let s = f4::SpherePoint::new(z[0], z[1], z[2]).map_err(py_err)?;
    let p = f4::h_param(&s, &torus(t)?).map_err(py_err)?;
    Ok(p.with_orbit(self::orbit(orbit)?).coords().to_vec())
}

/// `(|z3|, |z4|, |z5|)` on `M_Q^7`.
#[pyfunction]
fn mq7_magnitudes(z0: Complex64, z1: Complex64, z2: Complex64) -> PyResult<[f64; 3]> {
    f4::mq7_magnitudes(z0, z1, z2).map_err(py_err)
}

#[pyfunction]
fn mu_hat(z: Vec<Complex64>) -> PyResult<Vec<f64>> {
    Ok(moment::mu_hat(&ProjectivePoint::new(z).map_err(py_err)?).0)
}

#[pyfunction]
fn mu_tilde(z: Vec<Complex64>, n: usize) -> PyResult<Vec<f64>> {
    let p = ProjectivePoint::new(z).map_err(py_err)?;
    Ok(moment::mu_tilde(&p, n).map_err(py_err)?.0)
}

/// Normalized Plücker coordinates of the plane spanned by two rows.
#[pyfunction]
fn plucker_embed(row0: Vec<Complex64>, row1: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    let l = GrassmannPoint::new(row0, row1).map_err(py_err)?;
    Ok(grassfiber::plucker::plucker_embed(&l).map_err(py_err)?.coords().to_vec())
}

/// Regularity of a rational point such as `"1/3,5/9,5/9,5/9"` for `mu`.
#[pyfunction]
fn is_regular_mu(point: &str, n: usize) -> PyResult<bool> {
    regularity::is_regular_mu(&rational_point(point)?, n).map_err(py_err)
}

#[pyfunction]
fn is_regular_mu_tilde(point: &str, n: usize) -> PyResult<bool> {
    regularity::is_regular_mu_tilde(&rational_point(point)?, n).map_err(py_err)
}

/// `(sign vector, dimension, representative)` for each chamber of n = 4.
#[pyfunction]
fn enumerate_chambers() -> PyResult<Vec<(Vec<i8>, usize, Vec<String>)>> {
    Ok(regularity::enumerate_chambers(4)
        .map_err(py_err)?
        .into_iter()
        .map(|c| (c.id.signs().to_vec(), c.dimension, strings(&c.representative)))
        .collect())
}

#[pyfunction]
fn center_point_regular(n: usize) -> PyResult<bool> {
    regularity::center_point_regular(n).map_err(py_err)
}

/// Vertices `X01, X02, X12` of the triangle P as rational strings.
#[pyfunction]
fn triangle_vertices() -> PyResult<Vec<Vec<String>>> {
    Ok(f4::solve_triangle_p().map_err(py_err)?.vertices.iter().map(strings).collect())
}

#[pyfunction]
fn complete_intersection_f(u: [f64; 4], v: [f64; 4]) -> [f64; 3] {
    f4::complete_intersection_f(&u, &v)
}

#[pyfunction]
#[pyo3(signature = (u, v, tol = 1e-6))]
fn jacobian_rank(u: [f64; 4], v: [f64; 4], tol: f64) -> usize {
    f4::jacobian_rank(&u, &v, tol)
}

/// Transition of a `T^3` element between the two bundle charts.
#[pyfunction]
#[pyo3(signature = (t, inverse = false))]
fn bundle_transition(t: Vec<Complex64>, inverse: bool) -> PyResult<Vec<Complex64>> {
    let dir = if inverse { TransitionDirection::OneToZero } else { TransitionDirection::ZeroToOne };
    Ok(f4::bundle_transition(&torus(t)?, dir).map_err(py_err)?.phases().to_vec())
}

/// Seeded certificates as a JSON document.
#[pyfunction]
#[pyo3(signature = (kind, samples = 1000, seed = 0xC0FFEE, orbit = "minus"))]
fn sample_certificates(kind: &str, samples: usize, seed: u64, orbit: &str) -> PyResult<String> {
    let kind: FiberKind = kind.parse().map_err(py_err)?;
    let s = f4::sample_certificates(kind, samples, seed, self::orbit(orbit)?).map_err(py_err)?;
    Ok(serde_json::to_string(&s).expect("serializable"))
}

/// `(id, name, pass)` for each selected acceptance criterion.
#[pyfunction]
#[pyo3(signature = (seed = 0xC0FFEE, only = Vec::new()))]
fn acceptance_report(py: Python<'_>, seed: u64, only: Vec<String>) -> Vec<(usize, &'static str, bool)> {
    py.detach(|| acceptance::run(seed, &only))
        .into_iter()
        .map(|r| (r.id, r.name, r.pass))
        .collect()
}

#[pymodule]
fn pygrassfiber(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMQ5Point>()?;
    m.add_class::<PyM2Point>()?;
    m.add_function(wrap_pyfunction!(g_param, m)?)?;
    m.add_function(wrap_pyfunction!(h_param, m)?)?;
    m.add_function(wrap_pyfunction!(mq7_magnitudes, m)?)?;
    m.add_function(wrap_pyfunction!(mu_hat, m)?)?;
    m.add_function(wrap_pyfunction!(mu_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(plucker_embed, m)?)?;
    m.add_function(wrap_pyfunction!(is_regular_mu, m)?)?;
    m.add_function(wrap_pyfunction!(is_regular_mu_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_chambers, m)?)?;
    m.add_function(wrap_pyfunction!(center_point_regular, m)?)?;
    m.add_function(wrap_pyfunction!(triangle_vertices, m)?)?;
    m.add_function(wrap_pyfunction!(complete_intersection_f, m)?)?;
    m.add_function(wrap_pyfunction!(jacobian_rank, m)?)?;
    m.add_function(wrap_pyfunction!(bundle_transition, m)?)?;
    m.add_function(wrap_pyfunction!(sample_certificates, m)?)?;
    m.add_function(wrap_pyfunction!(acceptance_report, m)?)?;
    Ok(())
}
