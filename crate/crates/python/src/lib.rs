//! Python bindings. Matrices cross the boundary as lists of rows whose
//! entries may be ints, strings or `fractions.Fraction`; results come back
//! as `Fraction`s.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;

use nilcone::groups::{is_nilpotent, Sampler};
use nilcone::normalform::{genericity_minors, is_generic as generic, normal_form as nf};
use nilcone::quiver::{eval_f_phi, MorphismDatum};
use nilcone::quotients::relation_report as report;
use nilcone::rational::{parse, to_string};
use nilcone::semiinv::{self, verify_semiinvariance, weight_of};
use nilcone::toric::{self, accperm, default_enumeration_bound, induced_datum, BlockPair};
use nilcone::{Error, GroupKind, Matrix, ParabolicShape, Rational, SemiInvariantDatum, WeightedInvariant};

create_exception!(nilcone, NilconeError, PyValueError);
create_exception!(nilcone, NotGenericError, NilconeError);

fn err(e: Error) -> PyErr {
    match e {
        Error::NotGeneric(_) => NotGenericError::new_err(e.to_string()),
        _ => NilconeError::new_err(e.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    NilconeError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((to_string(r),))
}

fn rational(x: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse(&x.str()?.to_cow()?).map_err(err)
}

fn matrix(rows: &Bound<'_, PyAny>) -> PyResult<Matrix> {
    let rows: Vec<Vec<Bound<'_, PyAny>>> = rows.extract()?;
    let rows = rows.iter().map(|r| r.iter().map(rational).collect::<PyResult<Vec<_>>>()).collect::<PyResult<Vec<_>>>()?;
    let m = Matrix::from_rows(rows).map_err(err)?;
    if !m.is_square() {
        return Err(NilconeError::new_err("matrix must be square"));
    }
    Ok(m)
}

fn rows<'py>(py: Python<'py>, m: &Matrix) -> PyResult<Bound<'py, PyList>> {
    let out = PyList::empty(py);
    for i in 0..m.rows() {
        let row = PyList::empty(py);
        for x in m.row(i) {
            row.append(fraction(py, x)?)?;
        }
        out.append(row)?;
    }
    Ok(out)
}

fn from_json<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(json_err)?;
    py.import("json")?.getattr("loads")?.call1((text,))
}

/// A block datum `(row_blocks, col_blocks, polys)` defining `det(N^P)`.
#[pyclass(name = "Datum", module = "nilcone", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDatum {
    inner: SemiInvariantDatum,
}

#[pymethods]
impl PyDatum {
    /// `polys[k][l]` is a list of coefficients in ascending degree.
    #[new]
    fn new(row_blocks: Vec<usize>, col_blocks: Vec<usize>, polys: Vec<Vec<Vec<Bound<'_, PyAny>>>>) -> PyResult<Self> {
        let polys = polys
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cs| Ok(nilcone::Polynomial::new(cs.iter().map(rational).collect::<PyResult<_>>()?)))
                    .collect::<PyResult<Vec<_>>>()
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyDatum { inner: SemiInvariantDatum::new(row_blocks, col_blocks, polys).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyDatum { inner: serde_json::from_str(text).map_err(json_err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }

    #[getter]
    fn row_blocks(&self) -> Vec<usize> {
        self.inner.row_blocks().to_vec()
    }

    #[getter]
    fn col_blocks(&self) -> Vec<usize> {
        self.inner.col_blocks().to_vec()
    }

    fn weight(&self, n: usize) -> Vec<i64> {
        weight_of(&self.inner, n).0
    }

    fn eval<'py>(&self, py: Python<'py>, m: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &semiinv::eval(&matrix(m)?, &self.inner).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Datum({:?}, {:?})", self.inner.row_blocks(), self.inner.col_blocks())
    }
}

/// A semi-invariant together with its weight and a label.
#[pyclass(name = "Invariant", module = "nilcone", frozen)]
struct PyInvariant {
    inner: WeightedInvariant,
}

#[pymethods]
impl PyInvariant {
    #[new]
    #[pyo3(signature = (datum, n, label = "f"))]
    fn new(datum: &PyDatum, n: usize, label: &str) -> Self {
        PyInvariant { inner: WeightedInvariant::new(datum.inner.clone(), n, label) }
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label.clone()
    }

    #[getter]
    fn weight(&self) -> Vec<i64> {
        self.inner.weight.0.clone()
    }

    #[getter]
    fn datum(&self) -> PyDatum {
        PyDatum { inner: self.inner.datum.clone() }
    }

    fn eval<'py>(&self, py: Python<'py>, m: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.eval(&matrix(m)?).map_err(err)?)
    }

    /// Samples `f(b N b^-1) = chi(b) f(N)` over random `N` and `b`.
    #[pyo3(signature = (matrices = 10, elements = 5, seed = 0))]
    fn verify(&self, matrices: usize, elements: usize, seed: u64) -> PyResult<bool> {
        verify_semiinvariance(&self.inner, self.inner.n(), matrices, elements, seed).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Invariant({}, weight={:?})", self.inner.label, self.inner.weight.0)
    }
}

#[pyfunction]
fn det_k(n: usize, k: usize) -> PyResult<PyInvariant> {
    Ok(PyInvariant { inner: semiinv::det_k(n, k).map_err(err)? })
}

#[pyfunction]
fn f_ij(n: usize, i: usize, j: usize) -> PyResult<PyInvariant> {
    Ok(PyInvariant { inner: semiinv::f_ij(n, i, j).map_err(err)? })
}

#[pyfunction]
fn g_ij(n: usize, i: usize, j: usize) -> PyResult<PyInvariant> {
    Ok(PyInvariant { inner: semiinv::g_ij(n, i, j).map_err(err)? })
}

#[pyfunction]
fn det<'py>(py: Python<'py>, m: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &matrix(m)?.det().map_err(err)?)
}

#[pyfunction]
#[pyo3(name = "is_nilpotent")]
fn nilpotent(m: &Bound<'_, PyAny>) -> PyResult<bool> {
    Ok(is_nilpotent(&matrix(m)?))
}

#[pyfunction]
fn random_nilpotent<'py>(py: Python<'py>, n: usize, seed: u64) -> PyResult<Bound<'py, PyList>> {
    rows(py, &Sampler::new(seed).nilpotent(n))
}

fn shape_of(blocks: Option<Vec<usize>>, n: usize) -> PyResult<ParabolicShape> {
    let shape = match blocks {
        Some(b) => ParabolicShape::new(b).map_err(err)?,
        None => ParabolicShape::borel(n),
    };
    if shape.n() != n {
        return Err(NilconeError::new_err("blocks do not sum to the matrix size"));
    }
    Ok(shape)
}

/// Whether the genericity minors for the block shape (Borel by default) are nonzero.
#[pyfunction]
#[pyo3(signature = (m, blocks = None))]
fn is_generic(m: &Bound<'_, PyAny>, blocks: Option<Vec<usize>>) -> PyResult<bool> {
    let m = matrix(m)?;
    let shape = shape_of(blocks, m.rows())?;
    generic(&m, &shape).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (m, blocks = None))]
fn minors<'py>(py: Python<'py>, m: &Bound<'py, PyAny>, blocks: Option<Vec<usize>>) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let m = matrix(m)?;
    let shape = shape_of(blocks, m.rows())?;
    genericity_minors(&m, &shape).map_err(err)?.iter().map(|x| fraction(py, x)).collect()
}

/// `(H, g)` with `g N = H g`; `group` is "borel", "unipotent" or "parabolic".
#[pyfunction]
#[pyo3(signature = (m, group = "borel", blocks = None))]
fn normal_form<'py>(
    py: Python<'py>,
    m: &Bound<'py, PyAny>,
    group: &str,
    blocks: Option<Vec<usize>>,
) -> PyResult<(Bound<'py, PyList>, Bound<'py, PyList>)> {
    let m = matrix(m)?;
    let kind = match (group, blocks) {
        ("borel", None) => GroupKind::Borel,
        ("unipotent", None) => GroupKind::Unipotent,
        ("parabolic", Some(b)) => GroupKind::Parabolic { shape: shape_of(Some(b), m.rows())? },
        _ => return Err(NilconeError::new_err("group must be borel, unipotent, or parabolic with blocks")),
    };
    let out = nf(&m, &kind).map_err(err)?;
    Ok((rows(py, &out.h)?, rows(py, &out.cert.g)?))
}

#[pyfunction]
fn toric_exponents(n: usize, a: Vec<usize>, aprime: Vec<usize>) -> PyResult<Vec<u64>> {
    let bp = BlockPair::new(n, a, aprime).map_err(err)?;
    Ok(toric::toric_exponents(&bp).map_err(err)?.0)
}

/// The sum-free toric invariant of a sorted sum-free block pair.
#[pyfunction]
fn toric_datum(n: usize, a: Vec<usize>, aprime: Vec<usize>) -> PyResult<PyDatum> {
    let bp = BlockPair::new(n, a, aprime).map_err(err)?;
    let sigma = accperm(&bp).map_err(err)?;
    Ok(PyDatum { inner: induced_datum(&bp, &sigma).map_err(err)? })
}

/// `{"generators", "dual", "hilbert"}` for the toric cone.
#[pyfunction]
#[pyo3(signature = (n, bound = None))]
fn toric_cone<'py>(py: Python<'py>, n: usize, bound: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
    let cone = toric::toric_cone(n, bound.unwrap_or_else(|| default_enumeration_bound(n))).map_err(err)?;
    let dual = cone.dual().map_err(err)?;
    let hilbert = cone.hilbert_basis().map_err(err)?;
    from_json(
        py,
        &serde_json::json!({ "generators": cone.generators, "dual": dual.generators, "hilbert": hilbert }),
    )
}

/// Semi-invariant of a morphism between projectives, given as JSON.
#[pyfunction]
fn eval_quiver_si<'py>(py: Python<'py>, morphism: &str, m: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let phi: MorphismDatum = serde_json::from_str(morphism).map_err(json_err)?;
    fraction(py, &eval_f_phi(&matrix(m)?, &phi).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (n, trials = 50, seed = 0))]
fn relation_report<'py>(py: Python<'py>, n: usize, trials: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    from_json(py, &report(n, trials, seed).map_err(err)?)
}

#[pymodule(name = "nilcone")]
fn nilcone_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NilconeError", m.py().get_type::<NilconeError>())?;
    m.add("NotGenericError", m.py().get_type::<NotGenericError>())?;
    m.add_class::<PyDatum>()?;
    m.add_class::<PyInvariant>()?;
    m.add_function(wrap_pyfunction!(det_k, m)?)?;
    m.add_function(wrap_pyfunction!(f_ij, m)?)?;
    m.add_function(wrap_pyfunction!(g_ij, m)?)?;
    m.add_function(wrap_pyfunction!(det, m)?)?;
    m.add_function(wrap_pyfunction!(nilpotent, m)?)?;
    m.add_function(wrap_pyfunction!(random_nilpotent, m)?)?;
    m.add_function(wrap_pyfunction!(is_generic, m)?)?;
    m.add_function(wrap_pyfunction!(minors, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(toric_exponents, m)?)?;
    m.add_function(wrap_pyfunction!(toric_datum, m)?)?;
    m.add_function(wrap_pyfunction!(toric_cone, m)?)?;
    m.add_function(wrap_pyfunction!(eval_quiver_si, m)?)?;
    m.add_function(wrap_pyfunction!(relation_report, m)?)?;
    Ok(())
}
