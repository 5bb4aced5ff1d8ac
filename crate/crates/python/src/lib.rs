//! Python bindings: build a path-minimum index from weighted edges or
//! the text tree format, query it, and drive the adversarial generators.
//!
//! ```python
//! import pathmin_py
//! idx = pathmin_py.PathMinIndex(7, 0, [(0, 1, 5), (1, 2, 3), ...])
//! idx.query(4, 3)        # -> (4, 3): minimum node and its parent
//! idx.query(4, 0)        # -> None: empty path
//! ```

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use pathmin::adversary;
use pathmin::oracle::CountingOracle;
use pathmin::reference::BruteForceModel;
use pathmin::tree::{build_tree, format_tree, parse_tree};
use pathmin::{CompOrder, IntWeightOracle, QueryResult};

/// A built index over one rooted weighted tree.
///
/// Queries take a node `v` and a hop count `l` and return the minimum
/// edge on the upward path as `(node, parent)`, or `None` when `l = 0`.
/// All oracle comparisons happen in the constructor; `oracle_calls`
/// records how many.
#[pyclass(name = "PathMinIndex", module = "pathmin_py")]
struct PyPathMinIndex {
    index: pathmin::PathMinIndex,
    weights: IntWeightOracle,
    oracle_calls: u64,
    comp_calls: u64,
    build_ms: f64,
}

impl PyPathMinIndex {
    fn build(tree: pathmin::RootedTree, weights: IntWeightOracle) -> PyResult<Self> {
        let counting = CountingOracle::new(&weights);
        let index = pathmin::PathMinIndex::build(tree, &counting);
        let stats = *index.stats();
        Ok(Self {
            index,
            weights,
            oracle_calls: stats.oracle_calls,
            comp_calls: stats.comp_calls,
            build_ms: stats.build_time.as_secs_f64() * 1e3,
        })
    }

    fn result_to_py(&self, result: QueryResult) -> Option<(usize, usize)> {
        result.node().map(|m| {
            let parent = self.index.tree().parent(m).expect("minimum is never the root");
            (m, parent)
        })
    }

    fn check_node(&self, v: usize) -> PyResult<()> {
        let n = self.index.tree().len();
        if v >= n {
            return Err(PyValueError::new_err(format!("unknown node {v} (n = {n})")));
        }
        Ok(())
    }
}

#[pymethods]
impl PyPathMinIndex {
    /// Build from `n`, the root id, and undirected weighted edges
    /// `(u, v, w)`; orientation is derived from the root.
    #[new]
    fn new(n: usize, root: usize, edges: Vec<(usize, usize, i64)>) -> PyResult<Self> {
        let (tree, weights) =
            build_tree(n, root, &edges).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Self::build(tree, weights)
    }

    /// Build from the text tree format (`n root` header, `u v w` lines).
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let (tree, weights) =
            parse_tree(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Self::build(tree, weights)
    }

    /// Minimum edge on the half-open upward path from `v` over `l` hops:
    /// `(node, parent)`, or `None` for the empty path.
    fn query(&self, v: usize, l: usize) -> PyResult<Option<(usize, usize)>> {
        let result = self
            .index
            .query(v, l)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(self.result_to_py(result))
    }

    /// Same answer by a linear parent walk; the cross-check oracle.
    fn brute_min(&self, v: usize, l: usize) -> PyResult<Option<(usize, usize)>> {
        let tree = self.index.tree();
        let comp = CompOrder::new(&self.weights, tree.root());
        let model = BruteForceModel::new(tree, &comp);
        let result = model
            .brute_min(v, l)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(self.result_to_py(result))
    }

    #[getter]
    fn n(&self) -> usize {
        self.index.tree().len()
    }

    #[getter]
    fn root(&self) -> usize {
        self.index.tree().root()
    }

    #[getter]
    fn height(&self) -> usize {
        self.index.tree().height()
    }

    /// Oracle invocations made while building; queries make none.
    #[getter]
    fn oracle_calls(&self) -> u64 {
        self.oracle_calls
    }

    #[getter]
    fn comp_calls(&self) -> u64 {
        self.comp_calls
    }

    #[getter]
    fn build_ms(&self) -> f64 {
        self.build_ms
    }

    fn depth(&self, v: usize) -> PyResult<usize> {
        self.check_node(v)?;
        Ok(self.index.tree().depth(v))
    }

    fn parent(&self, v: usize) -> PyResult<Option<usize>> {
        self.check_node(v)?;
        Ok(self.index.tree().parent(v))
    }

    /// Edge weight represented by non-root node `v`.
    fn weight(&self, v: usize) -> PyResult<i64> {
        self.check_node(v)?;
        if v == self.index.tree().root() {
            return Err(PyValueError::new_err("the root carries no value"));
        }
        Ok(self.weights.weight(v))
    }

    /// SHA-256 of all stored tables; equal for identical inputs.
    fn structural_digest(&self) -> String {
        self.index.structural_digest()
    }

    /// The tree in the text format accepted by `from_text`.
    fn to_text(&self) -> String {
        format_tree(self.index.tree(), &self.weights)
    }

    fn __repr__(&self) -> String {
        format!(
            "PathMinIndex(n={}, root={}, height={}, oracle_calls={})",
            self.n(),
            self.root(),
            self.height(),
            self.oracle_calls
        )
    }
}

/// Adversarial spine instance as tree-format text. `choice` is "max"
/// (every leaf in its deepest admissible interval) or "below".
#[pyfunction]
#[pyo3(signature = (x, q, choice = "max", pad_to = None))]
fn adversary_instance(x: usize, q: usize, choice: &str, pad_to: Option<usize>) -> PyResult<String> {
    let choice = match choice {
        "max" => adversary::WeightChoice::all_max(x, q),
        "below" => adversary::WeightChoice::all_below(x, q),
        other => {
            return Err(PyValueError::new_err(format!(
                "choice must be \"max\" or \"below\", got {other:?}"
            )))
        }
    };
    let instance = adversary::generate_instance(x, q, &choice, pad_to)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(format_tree(&instance.tree, &instance.oracle))
}

/// Height-two family instance as tree-format text; `bits[i]` makes the
/// i-th leaf edge the lighter one.
#[pyfunction]
fn height_two_instance(bits: Vec<bool>) -> PyResult<String> {
    let instance = adversary::height_two_instance(bits.len(), &bits)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(format_tree(&instance.tree, &instance.oracle))
}

/// ceil(q * log2(x!)): comparisons any correct preprocessing needs.
#[pyfunction]
fn info_lower_bound(x: usize, q: usize) -> u64 {
    adversary::info_lower_bound(x, q)
}

/// Enumerate all weight choices for (x, q) and return
/// `(vectors, expected, distinct)`.
#[pyfunction]
fn check_distinguishability(x: usize, q: usize) -> PyResult<(u64, u64, bool)> {
    let report = adversary::check_distinguishability(x, q)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((report.vectors, report.expected, report.distinct))
}

/// The published (x, q) for node budget `n` and height budget `h`.
#[pyfunction]
fn parameter_choice(n: usize, h: usize) -> PyResult<(usize, usize)> {
    adversary::parameter_choice(n, h).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn pathmin_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyPathMinIndex>()?;
    m.add_function(wrap_pyfunction!(adversary_instance, m)?)?;
    m.add_function(wrap_pyfunction!(height_two_instance, m)?)?;
    m.add_function(wrap_pyfunction!(info_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(check_distinguishability, m)?)?;
    m.add_function(wrap_pyfunction!(parameter_choice, m)?)?;
    Ok(())
}
