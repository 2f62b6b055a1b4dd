//! Python bindings: rational polyhedral fans, the K-theory isomorphism
//! classifier, and piecewise Laurent polynomial operations. Laurent
//! polynomials cross the boundary as strings in the same syntax the CLI
//! uses; fans are a thin handle around the core type.

use std::sync::Arc;

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use fank_core::classify;
use fank_core::cone::cone_from_rays;
use fank_core::fan::{fan_from_description, Fan as CoreFan};
use fank_core::fanfile::parse_fan_text;
use fank_core::ideal::cone_ideal;
use fank_core::laurent::{format_laurent, parse_laurent, LaurentPoly};
use fank_core::piecewise::{self, PlpError};
use fank_core::registry;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A rational polyhedral fan: primitive rays and the maximal cones they
/// span. Immutable once constructed.
#[pyclass(frozen, module = "fank")]
struct Fan {
    inner: Arc<CoreFan>,
    warnings: Vec<String>,
}

impl Fan {
    fn wrap(fan: CoreFan, warnings: Vec<String>) -> Fan {
        Fan {
            inner: Arc::new(fan),
            warnings,
        }
    }

    fn parse_values(&self, values: &[String]) -> PyResult<Vec<LaurentPoly>> {
        values
            .iter()
            .map(|s| parse_laurent(s, self.inner.n).map_err(value_err))
            .collect()
    }

    fn max_cone(&self, cone: usize) -> PyResult<&fank_core::cone::Cone> {
        self.inner
            .max_cones
            .get(cone)
            .ok_or_else(|| value_err(format!("no maximal cone {cone}")))
    }
}

#[pymethods]
impl Fan {
    /// Build a fan from the ambient dimension, ray coordinates, and maximal
    /// cones given as lists of ray indices.
    #[staticmethod]
    fn from_data(n: usize, rays: Vec<Vec<BigInt>>, max_cones: Vec<Vec<usize>>) -> PyResult<Fan> {
        let (fan, warnings) = fan_from_description(n, &rays, &max_cones).map_err(value_err)?;
        Ok(Fan::wrap(
            fan,
            warnings.iter().map(|w| w.to_string()).collect(),
        ))
    }

    /// Parse the `dim` / `ray` / `cone` text format used by `.fan` files.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Fan> {
        let ff = parse_fan_text(text).map_err(value_err)?;
        let (fan, warnings) = ff.build().map_err(value_err)?;
        Ok(Fan::wrap(
            fan,
            warnings.iter().map(|w| w.to_string()).collect(),
        ))
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn rays(&self) -> Vec<Vec<BigInt>> {
        self.inner.rays.clone()
    }

    /// Maximal cones as sorted ray index lists.
    #[getter]
    fn max_cones(&self) -> Vec<Vec<usize>> {
        self.inner
            .max_cone_ray_sets
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect()
    }

    /// Normalization notes from construction (non-primitive rays replaced,
    /// duplicates dropped, non-maximal cones absorbed).
    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.warnings.clone()
    }

    fn is_smooth(&self) -> bool {
        self.inner.is_smooth()
    }

    fn is_complete(&self) -> bool {
        self.inner.is_complete()
    }

    fn is_simplicial(&self) -> bool {
        self.inner.is_simplicial()
    }

    /// None when the fan is incomplete (the test needs a complete support).
    fn is_polytopal(&self) -> Option<bool> {
        self.inner.is_polytopal().ok()
    }

    fn singular_cone_count(&self) -> usize {
        self.inner.singularity_report().singular_cones.len()
    }

    /// Every singular cone meets every other cone in a smooth face.
    fn all_singular_isolated(&self) -> bool {
        self.inner.singularity_report().all_isolated
    }

    /// Every pair of singular cones meets only at the origin.
    fn all_singular_distant(&self) -> bool {
        self.inner.singularity_report().all_distant
    }

    /// Decide whether equivariant K-theory agrees with the ring of integral
    /// piecewise Laurent polynomials on this fan.
    fn classify(&self) -> PyResult<Verdict> {
        let v = classify::classify(&self.inner).map_err(value_err)?;
        Ok(Verdict {
            outcome: v.outcome.to_string(),
            criterion: v.decided_by.map(|c| c.label().to_string()),
            holding: v.holding.iter().map(|c| c.label().to_string()).collect(),
            explanation: v.explanation,
            span_index: v.span_index,
            odd_rank: v.odd_rank,
        })
    }

    /// Rank of the odd K-group of a complete two-dimensional fan.
    fn odd_k1_rank(&self) -> PyResult<usize> {
        classify::odd_k1_rank(&self.inner).map_err(value_err)
    }

    /// The subfan generated by the chosen maximal cones, in the given order.
    fn subfan(&self, max_cone_indices: Vec<usize>) -> PyResult<Fan> {
        for &i in &max_cone_indices {
            if i >= self.inner.max_cones.len() {
                return Err(value_err(format!("no maximal cone {i}")));
            }
        }
        if max_cone_indices.is_empty() {
            return Err(value_err("subfan needs at least one maximal cone"));
        }
        Ok(Fan::wrap(self.inner.subfan(&max_cone_indices), Vec::new()))
    }

    /// Generators of the vanishing ideal of a maximal cone, as Laurent
    /// polynomial strings (Euler classes of a basis of the orthogonal
    /// lattice).
    fn max_cone_ideal_generators(&self, cone: usize) -> PyResult<Vec<String>> {
        let c = self.max_cone(cone)?;
        Ok(cone_ideal(c)
            .generator_polys()
            .iter()
            .map(format_laurent)
            .collect())
    }

    /// Generators of the vanishing ideal of a single ray.
    fn ray_ideal_generators(&self, ray: usize) -> PyResult<Vec<String>> {
        let r = self
            .inner
            .rays
            .get(ray)
            .ok_or_else(|| value_err(format!("no ray {ray}")))?;
        let c = cone_from_rays(self.inner.n, std::slice::from_ref(r)).map_err(value_err)?;
        Ok(cone_ideal(&c)
            .generator_polys()
            .iter()
            .map(format_laurent)
            .collect())
    }

    /// Whether the given per-cone values agree across every shared face.
    /// Structural problems (wrong count, unparsable values) raise ValueError.
    fn plp_validate(&self, values: Vec<String>) -> PyResult<bool> {
        let vals = self.parse_values(&values)?;
        match piecewise::plp_validate(self.inner.clone(), vals) {
            Ok(_) => Ok(true),
            Err(PlpError::IncompatiblePair { .. }) => Ok(false),
            Err(e) => Err(value_err(e)),
        }
    }

    /// Extend a piecewise polynomial from the subfan `gamma` over this
    /// (smooth) fan; returns one value per maximal cone of this fan.
    fn plp_extend(&self, gamma: &Fan, values: Vec<String>) -> PyResult<Vec<String>> {
        let vals = gamma.parse_values(&values)?;
        let f = piecewise::plp_validate(gamma.inner.clone(), vals).map_err(value_err)?;
        let ext =
            piecewise::extend_over_smooth_fan(&f, self.inner.clone()).map_err(value_err)?;
        Ok(ext.values.iter().map(format_laurent).collect())
    }

    /// Facets of a maximal cone as lists of fan ray indices, in the order
    /// the boundary-value operations expect their tuples.
    fn max_cone_facet_rays(&self, cone: usize) -> PyResult<Vec<Vec<usize>>> {
        let c = self.max_cone(cone)?;
        c.facets()
            .iter()
            .map(|f| {
                f.rays
                    .iter()
                    .map(|r| {
                        self.inner
                            .ray_index(r)
                            .ok_or_else(|| value_err("facet ray missing from the fan"))
                    })
                    .collect()
            })
            .collect()
    }

    /// Whether a tuple of boundary values (one per facet of the chosen
    /// maximal cone) lies in the image of restriction from the cone.
    fn cone_boundary_image_test(&self, cone: usize, values: Vec<String>) -> PyResult<bool> {
        let c = self.max_cone(cone)?;
        let facets = c.facets();
        if values.len() != facets.len() {
            return Err(value_err(format!(
                "cone {cone} has {} facets, got {} values",
                facets.len(),
                values.len()
            )));
        }
        let vals = self.parse_values(&values)?;
        Ok(piecewise::cone_boundary_image_test(&vals, c))
    }

    /// A single polynomial restricting to the given boundary values, or
    /// None when the tuple is outside the image.
    fn cone_boundary_preimage(&self, cone: usize, values: Vec<String>) -> PyResult<Option<String>> {
        let c = self.max_cone(cone)?;
        let facets = c.facets();
        if values.len() != facets.len() {
            return Err(value_err(format!(
                "cone {cone} has {} facets, got {} values",
                facets.len(),
                values.len()
            )));
        }
        let vals = self.parse_values(&values)?;
        match piecewise::cone_boundary_preimage(&vals, c) {
            Ok(p) => Ok(Some(format_laurent(&p))),
            Err(PlpError::NotInImage { .. }) => Ok(None),
            Err(e) => Err(value_err(e)),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Fan(n={}, rays={}, max_cones={})",
            self.inner.n,
            self.inner.rays.len(),
            self.inner.max_cones.len()
        )
    }
}

/// Result of the classifier: the outcome, the deciding criterion, every
/// criterion that holds, and the derived ranks for complete 2D fans.
#[pyclass(frozen, module = "fank")]
struct Verdict {
    #[pyo3(get)]
    outcome: String,
    #[pyo3(get)]
    criterion: Option<String>,
    #[pyo3(get)]
    holding: Vec<String>,
    #[pyo3(get)]
    explanation: String,
    #[pyo3(get)]
    span_index: Option<BigInt>,
    #[pyo3(get)]
    odd_rank: Option<usize>,
}

#[pymethods]
impl Verdict {
    fn __repr__(&self) -> String {
        match &self.criterion {
            Some(c) => format!("Verdict(outcome='{}', criterion='{}')", self.outcome, c),
            None => format!("Verdict(outcome='{}')", self.outcome),
        }
    }
}

/// The bundled example fans as (name, summary, parametric) triples.
#[pyfunction]
fn examples() -> Vec<(String, String, bool)> {
    registry::EXAMPLES
        .iter()
        .map(|e| (e.name.to_string(), e.summary.to_string(), e.parametric))
        .collect()
}

/// Load a bundled example fan by name; `r` selects the member of a
/// parametric family.
#[pyfunction]
#[pyo3(signature = (name, r = None))]
fn example(name: &str, r: Option<i64>) -> PyResult<Fan> {
    let fan = registry::example_fan(name, r).map_err(value_err)?;
    Ok(Fan::wrap(fan, Vec::new()))
}

/// The text of a bundled example in the `.fan` file format.
#[pyfunction]
#[pyo3(signature = (name, r = None))]
fn example_text(name: &str, r: Option<i64>) -> PyResult<String> {
    registry::example_fan_text(name, r).map_err(value_err)
}

#[pymodule]
fn fank(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Fan>()?;
    m.add_class::<Verdict>()?;
    m.add_function(wrap_pyfunction!(examples, m)?)?;
    m.add_function(wrap_pyfunction!(example, m)?)?;
    m.add_function(wrap_pyfunction!(example_text, m)?)?;
    Ok(())
}
