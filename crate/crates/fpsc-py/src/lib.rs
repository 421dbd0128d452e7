//! Python bindings: formulas, sequents, proofs, search, the structural
//! transformations, finite provability structures, and the acceptance
//! battery.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use fpsc::aps;
use fpsc::conseq;
use fpsc::enumerate::{self, EnumParams};
use fpsc::formula::{Formula as CoreFormula, F};
use fpsc::prooffile::{proof_from_text, proof_to_text};
use fpsc::prover::{self, SearchBudget, SearchVerdict};
use fpsc::sequent::Sequent as CoreSequent;
use fpsc::suite;
use fpsc::transform::{self, CutProblem};
use fpsc::Ruleset;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ruleset_of(name: &str) -> PyResult<Ruleset> {
    match name {
        "s" => Ok(Ruleset::S),
        "sc" => Ok(Ruleset::Sc),
        other => Err(value_err(format!("unknown ruleset `{other}`"))),
    }
}

#[pyclass(frozen, from_py_object, name = "Formula", module = "_fpsc")]
#[derive(Clone)]
struct PyFormula {
    inner: F,
}

#[pymethods]
impl PyFormula {
    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula({})", self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }

    fn free_vars(&self) -> Vec<String> {
        self.inner.free_vars().into_iter().collect()
    }

    fn is_closed(&self) -> bool {
        self.inner.is_closed()
    }

    fn is_modalized(&self, var: &str) -> bool {
        self.inner.is_modalized(var)
    }

    fn substitute(&self, b: &PyFormula, var: &str) -> PyResult<PyFormula> {
        CoreFormula::substitute(&self.inner, &b.inner, var)
            .map(|f| PyFormula { inner: f })
            .map_err(value_err)
    }

    fn unfold(&self) -> PyResult<PyFormula> {
        CoreFormula::unfold(&self.inner)
            .map(|f| PyFormula { inner: f })
            .map_err(value_err)
    }

    fn size(&self) -> usize {
        self.inner.size()
    }
}

#[pyclass(frozen, from_py_object, name = "Sequent", module = "_fpsc")]
#[derive(Clone)]
struct PySequent {
    inner: CoreSequent,
}

#[pymethods]
impl PySequent {
    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Sequent({})", self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner.multiset_eq(&other.inner)
    }

    fn ante(&self) -> Vec<PyFormula> {
        self.inner.ante.iter().map(|f| PyFormula { inner: f.clone() }).collect()
    }

    fn succ(&self) -> Vec<PyFormula> {
        self.inner.succ.iter().map(|f| PyFormula { inner: f.clone() }).collect()
    }
}

#[pyclass(frozen, from_py_object, name = "Proof", module = "_fpsc")]
#[derive(Clone)]
struct PyProof {
    inner: fpsc::Proof,
}

#[pymethods]
impl PyProof {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<PyProof> {
        proof_from_text(text).map(|p| PyProof { inner: p }).map_err(value_err)
    }

    fn to_text(&self) -> String {
        proof_to_text(&self.inner)
    }

    fn __str__(&self) -> String {
        self.to_text()
    }

    fn size(&self) -> usize {
        self.inner.size()
    }

    fn conclusion(&self) -> PySequent {
        PySequent { inner: self.inner.conclusion.clone() }
    }

    fn rule(&self) -> String {
        self.inner.rule.tag().to_string()
    }

    /// Raises ValueError with the node path on an invalid proof.
    #[pyo3(signature = (ruleset = "s"))]
    fn check(&self, ruleset: &str) -> PyResult<()> {
        self.inner.check(ruleset_of(ruleset)?).map_err(value_err)
    }
}

#[pyfunction]
fn parse_formula(text: &str) -> PyResult<PyFormula> {
    fpsc::parse_formula(text).map(|f| PyFormula { inner: f }).map_err(value_err)
}

#[pyfunction]
fn parse_sequent(text: &str) -> PyResult<PySequent> {
    fpsc::parse_sequent(text).map(|s| PySequent { inner: s }).map_err(value_err)
}

#[pyfunction]
fn atom(name: &str) -> PyFormula {
    PyFormula { inner: CoreFormula::atom(name) }
}

#[pyfunction]
fn var(name: &str) -> PyFormula {
    PyFormula { inner: CoreFormula::var(name) }
}

#[pyfunction]
fn bot() -> PyFormula {
    PyFormula { inner: CoreFormula::bot() }
}

#[pyfunction]
fn top() -> PyFormula {
    PyFormula { inner: CoreFormula::top() }
}

#[pyfunction]
fn imp(a: &PyFormula, b: &PyFormula) -> PyFormula {
    PyFormula { inner: CoreFormula::imp(a.inner.clone(), b.inner.clone()) }
}

#[pyfunction]
fn boxed(a: &PyFormula) -> PyFormula {
    PyFormula { inner: CoreFormula::boxed(a.inner.clone()) }
}

#[pyfunction]
fn neg(a: &PyFormula) -> PyFormula {
    PyFormula { inner: CoreFormula::neg(a.inner.clone()) }
}

#[pyfunction]
fn conj(a: &PyFormula, b: &PyFormula) -> PyFormula {
    PyFormula { inner: CoreFormula::conj(a.inner.clone(), b.inner.clone()) }
}

#[pyfunction]
fn mk_fp(var: &str, body: &PyFormula) -> PyResult<PyFormula> {
    CoreFormula::fp(var, body.inner.clone())
        .map(|f| PyFormula { inner: f })
        .map_err(value_err)
}

#[pyfunction]
fn goedel_fp(var: &str) -> PyFormula {
    PyFormula { inner: CoreFormula::goedel_fp(var) }
}

#[pyfunction]
fn henkin_fp(var: &str) -> PyFormula {
    PyFormula { inner: CoreFormula::henkin_fp(var) }
}

#[pyfunction]
fn induced_boxtimes(a: &PyFormula) -> PyFormula {
    PyFormula { inner: conseq::induced_boxtimes(&a.inner) }
}

/// Returns ("provable", proof) | ("refuted", None) | ("unknown", None).
#[pyfunction]
#[pyo3(signature = (sequent, max_depth = None, max_sequents = None, max_formula_size = None))]
fn search(
    sequent: &PySequent,
    max_depth: Option<usize>,
    max_sequents: Option<usize>,
    max_formula_size: Option<usize>,
) -> (String, Option<PyProof>) {
    let mut budget = SearchBudget::default();
    if let Some(d) = max_depth {
        budget.max_depth = d;
    }
    if let Some(n) = max_sequents {
        budget.max_sequents = n;
    }
    if let Some(s) = max_formula_size {
        budget.max_formula_size = s;
    }
    match prover::search(&sequent.inner, &budget) {
        SearchVerdict::Provable(w) => ("provable".into(), Some(PyProof { inner: w })),
        SearchVerdict::Refuted => ("refuted".into(), None),
        SearchVerdict::Unknown => ("unknown".into(), None),
    }
}

/// Returns "yes" | "no" | "unknown".
#[pyfunction]
fn equiv(a: &PyFormula, b: &PyFormula) -> String {
    match prover::equiv(&a.inner, &b.inner, &SearchBudget::default()) {
        prover::EquivAnswer::Yes => "yes".into(),
        prover::EquivAnswer::No => "no".into(),
        prover::EquivAnswer::Unknown => "unknown".into(),
    }
}

#[pyfunction]
fn eliminate_cut(
    left: &PyProof,
    right: &PyProof,
    left_occ: usize,
    right_occ: usize,
) -> PyResult<PyProof> {
    transform::eliminate_cut(&CutProblem {
        left: left.inner.clone(),
        right: right.inner.clone(),
        left_occ,
        right_occ,
    })
    .map(|p| PyProof { inner: p })
    .map_err(value_err)
}

#[pyfunction]
fn weaken(proof: &PyProof, add_left: Vec<PyFormula>, add_right: Vec<PyFormula>) -> PyProof {
    let al: Vec<F> = add_left.into_iter().map(|f| f.inner).collect();
    let ar: Vec<F> = add_right.into_iter().map(|f| f.inner).collect();
    PyProof { inner: transform::weaken(&proof.inner, &al, &ar) }
}

#[pyfunction]
fn strip_weakening(proof: &PyProof) -> PyResult<PyProof> {
    transform::strip_weakening(&proof.inner)
        .map(|p| PyProof { inner: p })
        .map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (vocabulary, max_size = 3, max_ante = 2, max_succ = 2))]
fn enumerate_proofs(
    vocabulary: Vec<PyFormula>,
    max_size: usize,
    max_ante: usize,
    max_succ: usize,
) -> Vec<PyProof> {
    let vocab: Vec<F> = vocabulary.into_iter().map(|f| f.inner).collect();
    enumerate::enumerate_proofs(&vocab, &EnumParams { max_size, max_ante, max_succ })
        .into_iter()
        .map(|p| PyProof { inner: p })
        .collect()
}

#[pyfunction]
fn compile_g2_proof() -> PyResult<PyProof> {
    conseq::compile_g2_proof(Ruleset::Sc)
        .map(|p| PyProof { inner: p })
        .map_err(value_err)
}

#[pyclass(frozen, name = "ApsInstance", module = "_fpsc")]
struct PyApsInstance {
    inner: aps::ApsInstance,
}

#[pymethods]
impl PyApsInstance {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<PyApsInstance> {
        aps::parse_aps(text).map(|i| PyApsInstance { inner: i }).map_err(value_err)
    }

    fn __str__(&self) -> String {
        aps::format_aps(&self.inner)
    }

    fn carrier(&self) -> Vec<String> {
        self.inner.carrier.clone()
    }

    fn consistent(&self) -> bool {
        self.inner.consistent()
    }

    /// List of (condition name, witness tokens or None).
    fn check_conditions(&self) -> Vec<(String, Option<Vec<String>>)> {
        aps::check_conditions(&self.inner)
            .checks
            .into_iter()
            .map(|c| (c.id.name().to_string(), c.witness))
            .collect()
    }

    fn conditions_report(&self) -> String {
        aps::check_conditions(&self.inner).to_string()
    }

    fn goedelian_fixed_points(&self) -> Vec<String> {
        self.inner
            .goedelian_fixed_points()
            .into_iter()
            .map(|k| self.inner.carrier[k].clone())
            .collect()
    }

    fn g2_trace(&self, fixed_point: &str) -> PyResult<String> {
        let p = self.inner.index_of(fixed_point).map_err(value_err)?;
        let trace = aps::g2_trace(&self.inner, p).map_err(value_err)?;
        Ok(trace.render(&self.inner))
    }

    fn g2_consistency_holds(&self, fixed_point: &str) -> PyResult<bool> {
        let p = self.inner.index_of(fixed_point).map_err(value_err)?;
        match aps::g2_consistency_check(&self.inner, p).map_err(value_err)? {
            aps::G2Consistency::Holds => Ok(true),
            aps::G2Consistency::Violated { .. } => Ok(false),
        }
    }

    fn uniqueness_holds(&self) -> PyResult<bool> {
        match aps::uniqueness_check(&self.inner).map_err(value_err)? {
            aps::UniquenessOutcome::Holds { .. } => Ok(true),
            aps::UniquenessOutcome::Violated { .. } => Ok(false),
        }
    }
}

#[pyfunction]
fn aps3() -> PyApsInstance {
    PyApsInstance { inner: aps::aps3() }
}

/// Runs the acceptance battery; returns (id, name, pass, detail) per
/// criterion.
#[pyfunction]
fn run_acceptance() -> Vec<(usize, String, bool, String)> {
    suite::run_all()
        .into_iter()
        .map(|o| (o.id, o.name.to_string(), o.pass, o.detail))
        .collect()
}

#[pymodule]
fn _fpsc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFormula>()?;
    m.add_class::<PySequent>()?;
    m.add_class::<PyProof>()?;
    m.add_class::<PyApsInstance>()?;
    m.add_function(wrap_pyfunction!(parse_formula, m)?)?;
    m.add_function(wrap_pyfunction!(parse_sequent, m)?)?;
    m.add_function(wrap_pyfunction!(atom, m)?)?;
    m.add_function(wrap_pyfunction!(var, m)?)?;
    m.add_function(wrap_pyfunction!(bot, m)?)?;
    m.add_function(wrap_pyfunction!(top, m)?)?;
    m.add_function(wrap_pyfunction!(imp, m)?)?;
    m.add_function(wrap_pyfunction!(boxed, m)?)?;
    m.add_function(wrap_pyfunction!(neg, m)?)?;
    m.add_function(wrap_pyfunction!(conj, m)?)?;
    m.add_function(wrap_pyfunction!(mk_fp, m)?)?;
    m.add_function(wrap_pyfunction!(goedel_fp, m)?)?;
    m.add_function(wrap_pyfunction!(henkin_fp, m)?)?;
    m.add_function(wrap_pyfunction!(induced_boxtimes, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(equiv, m)?)?;
    m.add_function(wrap_pyfunction!(eliminate_cut, m)?)?;
    m.add_function(wrap_pyfunction!(weaken, m)?)?;
    m.add_function(wrap_pyfunction!(strip_weakening, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_proofs, m)?)?;
    m.add_function(wrap_pyfunction!(compile_g2_proof, m)?)?;
    m.add_function(wrap_pyfunction!(aps3, m)?)?;
    m.add_function(wrap_pyfunction!(run_acceptance, m)?)?;
    Ok(())
}
