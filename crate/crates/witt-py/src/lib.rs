//! Python bindings: contexts, Witt vectors, the three backends, and the
//! text format.

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use witt::error::Error;
use witt::poly::parse::parse_poly;
use witt::textio::{parse_witt as parse_witt_text, print_witt};
use witt::witt::{Backend, BoundKind, WittContext, WittVector};
use witt::witt as wcore;

fn to_py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn backend_of(name: &str) -> PyResult<Backend> {
    name.parse().map_err(to_py_err)
}

fn kind_of(name: &str) -> PyResult<BoundKind> {
    name.parse().map_err(to_py_err)
}

/// Parameters of W_n(F_{p^d}[X_1..X_m]).
#[pyclass(name = "WittContext", frozen)]
struct PyWittContext {
    inner: WittContext,
}

#[pymethods]
impl PyWittContext {
    #[new]
    fn new(p: u64, d: usize, n: u32, m: usize) -> PyResult<Self> {
        let inner = WittContext::new(BigUint::from(p), d, n, m).map_err(to_py_err)?;
        Ok(PyWittContext { inner })
    }

    #[getter]
    fn p(&self) -> String {
        self.inner.p().to_string()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.field().degree()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn __repr__(&self) -> String {
        format!(
            "WittContext(p={}, d={}, n={}, m={})",
            self.inner.p(),
            self.inner.field().degree(),
            self.inner.n(),
            self.inner.m()
        )
    }

    /// The zero vector.
    fn zero(&self) -> PyWittVector {
        PyWittVector {
            inner: wcore::witt_zero(&self.inner),
        }
    }

    /// The multiplicative identity.
    fn one(&self) -> PyWittVector {
        PyWittVector {
            inner: wcore::witt_one(&self.inner),
        }
    }

    /// Teichmueller representative of a coordinate polynomial, given as text.
    fn teichmueller(&self, poly: &str) -> PyResult<PyWittVector> {
        let p = parse_poly(poly, self.inner.field().clone(), self.inner.m())
            .map_err(to_py_err)?;
        Ok(PyWittVector {
            inner: wcore::teichmueller(&self.inner, &p),
        })
    }

    /// Vector built from one polynomial string per coordinate.
    fn from_coords(&self, coords: Vec<String>) -> PyResult<PyWittVector> {
        let parsed: Result<Vec<_>, _> = coords
            .iter()
            .map(|s| parse_poly(s, self.inner.field().clone(), self.inner.m()))
            .collect();
        let inner = WittVector::from_coords(self.inner.clone(), parsed.map_err(to_py_err)?)
            .map_err(to_py_err)?;
        Ok(PyWittVector { inner })
    }

    /// Seeded random vector; kind is "total" or "per-var".
    #[pyo3(signature = (degree_bound, seed, kind = "total"))]
    fn random(&self, degree_bound: u32, seed: u64, kind: &str) -> PyResult<PyWittVector> {
        Ok(PyWittVector {
            inner: wcore::random_witt(&self.inner, degree_bound, kind_of(kind)?, seed),
        })
    }
}

/// An element of W_n(F_q[X_1..X_m]).
#[pyclass(name = "WittVector", frozen)]
struct PyWittVector {
    inner: WittVector,
}

#[pymethods]
impl PyWittVector {
    /// Coordinates as polynomial strings.
    fn coords(&self) -> Vec<String> {
        self.inner.coords().iter().map(|c| c.to_string()).collect()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __str__(&self) -> String {
        print_witt(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("WittVector({:?})", self.coords())
    }

    fn __eq__(&self, other: &PyWittVector) -> bool {
        self.inner == other.inner
    }

    #[pyo3(signature = (other, backend = "illusie"))]
    fn add(&self, other: &PyWittVector, backend: &str) -> PyResult<PyWittVector> {
        Ok(PyWittVector {
            inner: wcore::witt_add(&self.inner, &other.inner, backend_of(backend)?)
                .map_err(to_py_err)?,
        })
    }

    #[pyo3(signature = (other, backend = "illusie"))]
    fn sub(&self, other: &PyWittVector, backend: &str) -> PyResult<PyWittVector> {
        Ok(PyWittVector {
            inner: wcore::witt_sub(&self.inner, &other.inner, backend_of(backend)?)
                .map_err(to_py_err)?,
        })
    }

    #[pyo3(signature = (other, backend = "illusie"))]
    fn mul(&self, other: &PyWittVector, backend: &str) -> PyResult<PyWittVector> {
        Ok(PyWittVector {
            inner: wcore::witt_mul(&self.inner, &other.inner, backend_of(backend)?)
                .map_err(to_py_err)?,
        })
    }

    #[pyo3(signature = (backend = "illusie"))]
    fn neg(&self, backend: &str) -> PyResult<PyWittVector> {
        Ok(PyWittVector {
            inner: wcore::witt_neg(&self.inner, backend_of(backend)?).map_err(to_py_err)?,
        })
    }

    /// The n ghost components, as polynomial strings over the Galois ring.
    fn ghost_components(&self) -> Vec<String> {
        wcore::ghost_components(&self.inner)
            .components()
            .iter()
            .map(|c| c.to_string())
            .collect()
    }

    /// The single lifted polynomial of the injective degree-(n-1) ghost map.
    fn illusie_lift(&self) -> String {
        wcore::illusie_lift(&self.inner).to_string()
    }

    fn frobenius(&self, r: u32) -> PyWittVector {
        PyWittVector {
            inner: wcore::witt_frobenius(&self.inner, r),
        }
    }

    fn verschiebung(&self, r: u32) -> PyWittVector {
        PyWittVector {
            inner: wcore::verschiebung(&self.inner, r),
        }
    }
}

/// Parses the text format produced by str(vector).
#[pyfunction]
fn parse_witt(text: &str) -> PyResult<PyWittVector> {
    Ok(PyWittVector {
        inner: parse_witt_text(text).map_err(to_py_err)?,
    })
}

#[pymodule]
fn witt_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWittContext>()?;
    m.add_class::<PyWittVector>()?;
    m.add_function(wrap_pyfunction!(parse_witt, m)?)?;
    Ok(())
}
