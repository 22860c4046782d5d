//! Python bindings: structures, their checks, certificates and the
//! representation run.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use splitblur::blowup::{
    all_subsets, alpha_of_graph, blur_structure, f_l_mu, AtomStructureSpec, GraphScheme, SymbolicAtom, Truncation,
};
use splitblur::finite_ra::{check_axioms, default_atom_names, make_m};
use splitblur::graphs::{chromatic_number as chi, Graph};
use splitblur::matrices::{check_cylindric_basis, enumerate_matrices};
use splitblur::nonrep;
use splitblur::representation::{
    default_generators, new_graph, pending_count, sample_elements, saturate, verify_representation,
};
use splitblur::symbolic::{check_blur_conditions, n_complex_blur as ncb};
use splitblur::Error;

create_exception!(splitblur_py, CertificateError, PyException);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidDefect(_) | Error::NoBlurAvailable { .. } | Error::InvalidStructure(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// An atom structure: a blur structure, `F(l, mu)`, or `alpha` over disjoint
/// cliques.
#[pyclass(module = "splitblur_py")]
struct Structure {
    inner: AtomStructureSpec,
}

/// `None` is the identity; `(row, blur, base)` a blur atom; `(node, color)`
/// a graph atom.
fn atom(t: Option<Vec<usize>>) -> PyResult<SymbolicAtom> {
    match t.as_deref() {
        None => Ok(SymbolicAtom::Identity),
        Some(&[row, blur, base]) => Ok(SymbolicAtom::Blur { row: row as u32, blur, base }),
        Some(&[node, color]) => Ok(SymbolicAtom::Graph { node, color }),
        Some(other) => Err(PyValueError::new_err(format!("not an atom: {other:?}"))),
    }
}

#[pymethods]
impl Structure {
    /// The blur structure over M with all 2-element blurs of `base_atoms` atoms.
    #[staticmethod]
    fn blur(base_atoms: usize) -> PyResult<Self> {
        let m = make_m(&default_atom_names(base_atoms)).map_err(to_py)?;
        let inner = blur_structure(&m, &all_subsets(base_atoms, 2)).map_err(to_py)?;
        Ok(Structure { inner })
    }

    #[staticmethod]
    fn f_l_mu(base_atoms: usize, l: usize, mu: usize) -> PyResult<Self> {
        let inner = f_l_mu(&default_atom_names(base_atoms), l, mu).map_err(to_py)?;
        Ok(Structure { inner })
    }

    #[staticmethod]
    fn alpha(clique_size: usize, colors: usize) -> PyResult<Self> {
        let inner = alpha_of_graph(GraphScheme::CliqueCopies { clique_size }, colors).map_err(to_py)?;
        Ok(Structure { inner })
    }

    /// Construction parameters as JSON.
    fn params(&self) -> String {
        serde_json::to_string(&self.inner.params()).expect("params serialize")
    }

    #[pyo3(signature = (a, b, c))]
    fn consistent(&self, a: Option<Vec<usize>>, b: Option<Vec<usize>>, c: Option<Vec<usize>>) -> PyResult<bool> {
        let (a, b, c) = (atom(a)?, atom(b)?, atom(c)?);
        for x in [a, b, c] {
            if !self.inner.is_atom(x) {
                return Err(PyValueError::new_err(format!("{x} is not an atom of this structure")));
            }
        }
        Ok(self.inner.consistent(a, b, c))
    }

    /// Atom count of the truncation to `depth` rows (or `copies` cliques).
    #[pyo3(signature = (depth = 8, copies = 10))]
    fn truncated_atoms(&self, depth: u32, copies: usize) -> PyResult<usize> {
        let t = self.inner.truncate(&Truncation { depth, copies }).map_err(to_py)?;
        Ok(t.structure.atom_count())
    }

    /// Number of axiom violations on the truncation.
    #[pyo3(signature = (depth = 8, copies = 10))]
    fn check_axioms(&self, depth: u32, copies: usize) -> PyResult<usize> {
        let t = self.inner.truncate(&Truncation { depth, copies }).map_err(to_py)?;
        Ok(check_axioms(&t.structure).violations.len())
    }

    fn blur_conditions<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let b = self
            .inner
            .as_blur()
            .ok_or_else(|| PyValueError::new_err("not a blur structure"))?;
        let report = check_blur_conditions(b);
        let d = PyDict::new(py);
        d.set_item("pairs_checked", report.pairs_checked)?;
        d.set_item("label_triples_checked", report.label_triples_checked)?;
        d.set_item("violations", report.violations.len())?;
        Ok(d)
    }

    /// A certificate as JSON. `alpha` structures are colored optimally on a
    /// window of `copies` cliques.
    #[pyo3(signature = (depth = 8, seed = 0, copies = 10))]
    fn certify(&self, depth: u32, seed: u64, copies: usize) -> PyResult<String> {
        let coloring = self.inner.as_alpha().map(|a| chi(&a.scheme.window(copies)).1);
        let cert = nonrep::certify(&self.inner, coloring.as_ref(), Truncation { depth, copies }, seed).map_err(to_py)?;
        Ok(cert.to_json())
    }

    /// Saturates for `steps` steps and verifies on `sample` seeded elements.
    #[pyo3(signature = (steps = 300, seed = 0, sample = 24))]
    fn represent<'py>(&self, py: Python<'py>, steps: usize, seed: u64, sample: usize) -> PyResult<Bound<'py, PyDict>> {
        let b = self
            .inner
            .as_blur()
            .ok_or_else(|| PyValueError::new_err("not a blur structure"))?;
        let gens = default_generators(b);
        let mut g = new_graph();
        py.detach(|| saturate(&mut g, b, &gens, steps)).map_err(to_py)?;
        let report = verify_representation(&g, b, &sample_elements(b, sample, seed), pending_count(&g, b, &gens));
        let mut log = Vec::new();
        g.write_step_log(&mut log).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        let d = PyDict::new(py);
        d.set_item("nodes", report.nodes)?;
        d.set_item("violations", report.violations.len())?;
        d.set_item("dequeued", report.dequeued)?;
        d.set_item("resolved_atoms", report.resolved_atoms)?;
        d.set_item("step_log", String::from_utf8(log).expect("JSON is UTF-8"))?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Structure({})", self.params())
    }
}

/// Re-verifies a certificate; raises `CertificateError` naming what failed.
#[pyfunction]
fn check_certificate(text: &str) -> PyResult<()> {
    nonrep::check_certificate(text)
        .map(|_| ())
        .map_err(|e| CertificateError::new_err(e.to_string()))
}

/// The n-complex-blur property of M over `base_atoms` atoms with all 2-element
/// blurs.
#[pyfunction]
fn n_complex_blur(base_atoms: usize, n: usize) -> PyResult<bool> {
    let m = make_m(&default_atom_names(base_atoms)).map_err(to_py)?;
    Ok(ncb(&m, &all_subsets(base_atoms, 2), n))
}

/// `(matrix count, amalgamation failures)` for M in dimension `n`.
#[pyfunction]
fn basic_matrices(base_atoms: usize, n: usize) -> PyResult<(usize, usize)> {
    let m = make_m(&default_atom_names(base_atoms)).map_err(to_py)?;
    let ms = enumerate_matrices(&m, n).map_err(to_py)?;
    Ok((ms.len(), check_cylindric_basis(&m, n, &ms).failure_count))
}

/// Exact chromatic number and an optimal coloring.
#[pyfunction]
fn chromatic_number(nodes: usize, edges: Vec<(usize, usize)>) -> PyResult<(usize, Vec<usize>)> {
    let g = Graph::from_edges(nodes, edges).map_err(to_py)?;
    let (k, c) = chi(&g);
    Ok((k, c.assignment))
}

/// `(clique size, chromatic number, certificate JSON)` per member.
#[pyfunction]
#[pyo3(signature = (n = 3, count = 4, seed = 0))]
fn monk_sequence(n: usize, count: usize, seed: u64) -> PyResult<Vec<(usize, usize, String)>> {
    let members = nonrep::monk_sequence(n, count, seed).map_err(to_py)?;
    Ok(members
        .into_iter()
        .map(|m| (m.clique_size, m.chromatic_number, m.certificate.to_json()))
        .collect())
}

#[pymodule]
fn splitblur_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Structure>()?;
    m.add("CertificateError", m.py().get_type::<CertificateError>())?;
    m.add("__version__", splitblur::TOOL_VERSION)?;
    m.add_function(wrap_pyfunction!(check_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(n_complex_blur, m)?)?;
    m.add_function(wrap_pyfunction!(basic_matrices, m)?)?;
    m.add_function(wrap_pyfunction!(chromatic_number, m)?)?;
    m.add_function(wrap_pyfunction!(monk_sequence, m)?)?;
    Ok(())
}
