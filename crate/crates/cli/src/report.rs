//! Per-fixture analysis and the JSON report built from it.

use std::collections::BTreeMap;

use serde::Serialize;
use smallcover_core::charfun::{
    check_star, direct_general_position, enumerate_general_position_functionals, is_general_position,
    orientability_functional, tangent_weights,
};
use smallcover_core::gf2::all_vectors;
use smallcover_core::small_cover::{euler_characteristic_formula, SmallCoverComplex};
use smallcover_core::standard_action::{sphere_betti, SignSubgroup};
use smallcover_core::{Gf2Matrix, Subtorus};

use crate::error::CliError;
use crate::input::Instance;

/// Exhaustive searches over functionals stop at this rank.
const EXHAUSTIVE_MAX_N: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub dim: usize,
    pub vertices: usize,
    pub orientable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unique: Option<bool>,
    /// Number of `ξ` with `ξ(λᵢ) = 1` for all `i`, by exhaustive search.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functionals_found: Option<usize>,
    #[serde(rename = "betti_X")]
    pub betti_x: Vec<usize>,
    pub h_vector: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formality_pass: Option<bool>,
    #[serde(rename = "betti_Q", skip_serializing_if = "Option::is_none")]
    pub betti_q: Option<Vec<usize>>,
    #[serde(rename = "euler_Q", skip_serializing_if = "Option::is_none")]
    pub euler_q: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub doubling_isomorphic: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filtration_pass: Option<bool>,
    pub checks: BTreeMap<&'static str, bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

struct Checks {
    map: BTreeMap<&'static str, bool>,
    failures: Vec<String>,
}

impl Checks {
    fn record(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let entry = self.map.entry(name).or_insert(true);
        *entry &= ok;
        if !ok {
            self.failures.push(format!("{name}: {}", detail()));
        }
    }
}

/// Builds `X(P, λ)`, looks for the subgroup in general position and, when it
/// exists, runs every check on the quotient.
pub fn analyze(instance: &Instance) -> Result<Report, CliError> {
    let p = &instance.polytope;
    let lambda = instance
        .lambda
        .as_ref()
        .ok_or_else(|| CliError::Schema(format!("{}: no characteristic function given", instance.name)))?;
    check_star(p, lambda).map_err(|e| CliError::Math(e.to_string()))?;
    let x = SmallCoverComplex::build(p, lambda).map_err(|e| CliError::Math(e.to_string()))?;
    let n = p.dim();
    let mut checks = Checks {
        map: BTreeMap::new(),
        failures: Vec::new(),
    };

    checks.record("boundary_squared", x.complex().check_boundary_squared().is_ok(), || {
        "X has nonzero boundary of a boundary".into()
    });
    let betti_x = x.betti();
    let h_vector = p.h_vector();
    checks.record("betti_equals_h", x.betti_matches_h_vector(), || {
        format!("betti {betti_x:?} vs h {h_vector:?}")
    });
    let total: usize = betti_x.iter().sum();
    checks.record("betti_sum_equals_vertices", total == p.vertex_count(), || {
        format!("sum of betti {total} vs {} vertices", p.vertex_count())
    });
    let chi = x.complex().euler_characteristic();
    let chi_formula = euler_characteristic_formula(p);
    let chi_orbits = x.orbit_count_euler(&SignSubgroup::trivial(n));
    checks.record("euler_characteristic", chi == chi_formula && chi == chi_orbits, || {
        format!("cellular {chi}, face formula {chi_formula}, orbit count {chi_orbits}")
    });
    let pairing_ok = (0..p.vertex_count()).all(|v| {
        tangent_weights(p, lambda, v).is_ok_and(|tw| tw.pairing(lambda) == Gf2Matrix::identity(n))
    });
    checks.record("tangent_weights_dual", pairing_ok, || "pairing is not the identity".into());

    let orientability = orientability_functional(lambda).map_err(|e| CliError::Math(e.to_string()))?;
    let orientable = orientability.is_some();
    let functionals_found = (n <= EXHAUSTIVE_MAX_N).then(|| enumerate_general_position_functionals(lambda));
    if let Some(found) = &functionals_found {
        let expected = usize::from(orientable);
        checks.record("functional_uniqueness", found.len() == expected, || {
            format!("{} functionals found, expected {expected}", found.len())
        });
        if let Some(o) = &orientability {
            checks.record("functional_uniqueness", found.first() == Some(o.subtorus.xi()) && o.unique, || {
                "solver and search disagree".into()
            });
        }
        let agree = all_vectors(n).filter(|v| !v.is_zero()).all(|xi| {
            let g = Subtorus::from_functional(xi).expect("nonzero");
            direct_general_position(p, lambda, &g).is_ok_and(|d| d == is_general_position(lambda, &g))
        });
        checks.record("general_position_agreement", agree, || {
            "weight criterion and facet criterion disagree".into()
        });
    }

    let mut report = Report {
        name: instance.name.clone(),
        dim: n,
        vertices: p.vertex_count(),
        orientable,
        xi: None,
        unique: None,
        functionals_found: functionals_found.as_ref().map(Vec::len),
        betti_x: betti_x.clone(),
        h_vector: h_vector.clone(),
        formality_pass: None,
        betti_q: None,
        euler_q: None,
        doubling_isomorphic: None,
        filtration_pass: None,
        checks: BTreeMap::new(),
        failures: Vec::new(),
    };

    for face in 0..x.lattice().len() {
        if face == x.lattice().top() {
            continue;
        }
        let f = x.lattice().face(face);
        match x.face_submanifold(face) {
            Ok(sub) => {
                let sum: usize = sub.complex.betti_mod2().iter().sum();
                checks.record("face_submanifolds", sub.isomorphic && sum == f.vertices.len(), || {
                    format!("face {}: isomorphic {}, betti sum {sum}", f.label(), sub.isomorphic)
                });
            }
            Err(e) => checks.record("face_submanifolds", false, || format!("face {}: {e}", f.label())),
        }
    }

    if let Some(o) = &orientability {
        let g = &o.subtorus;
        report.xi = Some(g.xi().to_bit_string());
        report.unique = Some(o.unique);

        let formality = x.formality_check(g);
        report.formality_pass = Some(formality.pass());
        checks.record("formality", formality.pass(), || {
            format!("fixed set betti sum {} vs {}", formality.fixed_betti_sum, formality.betti_sum)
        });
        checks.record("free_part", x.free_part_criterion(g), || {
            "free cells are not those over faces of codimension at most one".into()
        });

        let q = x.orbit_space(g).map_err(|e| CliError::Theorem(e.to_string()))?;
        let betti_q = q.betti();
        let euler_q = q.complex.euler_characteristic();
        let sphere_euler = 1 + if n % 2 == 0 { 1 } else { -1 };
        checks.record("boundary_squared", q.complex.check_boundary_squared().is_ok(), || {
            "Q has nonzero boundary of a boundary".into()
        });
        checks.record("sphere", betti_q == sphere_betti(n) && euler_q == sphere_euler, || {
            format!("betti {betti_q:?}, euler characteristic {euler_q}")
        });
        let h = SignSubgroup::from_generators(n, g.basis()).expect("subtorus in Z₂ⁿ");
        checks.record("euler_characteristic", x.orbit_count_euler(&h) == euler_q, || {
            format!("orbit count {} vs cellular {euler_q}", x.orbit_count_euler(&h))
        });

        let doubling = q.doubling_isomorphism(p, x.lattice());
        report.doubling_isomorphic = Some(doubling.is_ok());
        checks.record("doubling", doubling.is_ok(), || format!("{}", doubling.unwrap_err()));

        let filtration = q.filtration_checks(x.lattice());
        report.filtration_pass = Some(filtration.pass());
        checks.record("filtration", filtration.pass(), || filtration.failures.join("; "));

        let independent = x.quotient_is_representative_independent(g);
        checks.record("representative_independent", matches!(independent, Ok(true)), || {
            format!("{independent:?}")
        });

        report.betti_q = Some(betti_q);
        report.euler_q = Some(euler_q);
    }

    if let Some(expected) = &instance.expected {
        if let Some(want) = expected.orientable {
            checks.record("expected_values", want == orientable, || {
                format!("orientable is {orientable}, fixture expects {want}")
            });
        }
        if let Some(want) = &expected.betti_x {
            checks.record("expected_values", *want == report.betti_x, || {
                format!("betti_X is {:?}, fixture expects {want:?}", report.betti_x)
            });
        }
        if let Some(want) = &expected.betti_q {
            checks.record("expected_values", Some(want) == report.betti_q.as_ref(), || {
                format!("betti_Q is {:?}, fixture expects {want:?}", report.betti_q)
            });
        }
    }

    report.checks = checks.map;
    report.failures = checks.failures;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::bundled_by_name;

    fn report(name: &str) -> Report {
        analyze(&bundled_by_name(name).unwrap().instance().unwrap()).unwrap()
    }

    #[test]
    fn torus_report() {
        let r = report("T3");
        assert!(r.all_pass(), "{:?}", r.failures);
        assert_eq!(r.betti_q, Some(vec![1, 0, 0, 1]));
        assert_eq!(r.xi.as_deref(), Some("111"));
    }

    #[test]
    fn non_orientable_reports() {
        let r = report("RP2");
        assert!(!r.orientable);
        assert!(r.betti_q.is_none());
        assert!(r.all_pass(), "{:?}", r.failures);
        assert!(!r.to_json().contains("betti_Q"));
        assert!(!report("RP4").orientable);
    }
}
