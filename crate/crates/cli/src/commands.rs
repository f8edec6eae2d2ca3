use serde_json::{json, Value};
use spin_gpc::catalog::{pauli_constraints, CatalogKey};
use spin_gpc::geometry::{distance_report, spectral_polytope, validate, Distance};
use spin_gpc::qparam::{builtin_intersections, QEvaluator, Variant};
use spin_gpc::selection::{interior_weights, select_joint, sector_dimension, weight_lattice, SelectionResult, Weight};
use spin_gpc::truncation::bounds;
use spin_gpc::{ConstraintCatalog, Error, LinearConstraint, OccupationVector, Relation, Result, Setting, Q};

use crate::input::VectorFile;
use crate::report::{exact, exact_list, qvalue};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_NOT_COVERED: u8 = 3;
pub const EXIT_BOUND: u8 = 4;

/// A report and the exit code it implies.
pub struct Outcome {
    pub report: Value,
    pub exit: u8,
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotCovered(_) => EXIT_NOT_COVERED,
        Error::Bound(_) => EXIT_BOUND,
        _ => EXIT_INVALID,
    }
}

pub fn setting_json(s: &Setting) -> Value {
    json!({
        "label": s.to_string(),
        "N": s.n_particles,
        "d": s.n_orbitals,
        "2S": s.two_s,
        "2M": s.two_m,
    })
}

fn constraint_json(index: usize, c: &LinearConstraint) -> Value {
    json!({
        "index": index,
        "constraint": c.to_string(),
        "kappa0": exact(&c.kappa0),
        "kappa": exact_list(&c.kappa),
        "relation": match c.relation { Relation::GeqZero => "geq", Relation::EqZero => "eq" },
    })
}

pub fn cmd_catalog(cat: &ConstraintCatalog, setting: Option<Setting>) -> Result<Outcome> {
    let report = match setting {
        None => {
            let rows: Vec<Value> = cat
                .settings()
                .into_iter()
                .map(|(key, count)| {
                    let kind = match key {
                        CatalogKey::Orbital(_) => "orbital",
                        CatalogKey::SpinOrbital { .. } => "spin-orbital",
                    };
                    json!({
                        "setting": key.to_string(),
                        "kind": kind,
                        "gpcs": count,
                        "provenance": cat.entries[&key].provenance,
                    })
                })
                .collect();
            json!({ "settings": rows, "warnings": cat.warnings })
        }
        Some(s) => {
            let lookup = cat.lookup(s.key())?;
            let gpcs: Vec<Value> = lookup
                .gpcs
                .iter()
                .enumerate()
                .map(|(i, c)| constraint_json(i + 1, c))
                .collect();
            let implied: Vec<Value> = pauli_constraints(&s)
                .iter()
                .map(|c| json!({ "label": c.label, "constraint": c.to_string() }))
                .collect();
            json!({
                "setting": setting_json(&s),
                "provenance": lookup.provenance,
                "extended_by_stabilization": lookup.extended_by_stabilization,
                "gpcs": gpcs,
                "implied": implied,
            })
        }
    };
    Ok(Outcome { report, exit: EXIT_OK })
}

pub struct AnalyzeOptions {
    pub d_prime: Vec<usize>,
    pub qp_tol: Q,
    pub norm_tol: Q,
}

fn pin_flag(residual: &Q, tol: &Q) -> &'static str {
    if residual == &Q::from_integer(0.into()) {
        "PINNED"
    } else if residual < &Q::from_integer(0.into()) {
        "VIOLATED"
    } else if residual <= tol {
        "QUASIPINNED"
    } else {
        "NONE"
    }
}

/// Sorts in decreasing order, noting it in `warnings`.
fn sorted_input(values: &[Q], warnings: &mut Vec<String>) -> OccupationVector {
    let v = OccupationVector::orbital(values.to_vec());
    if values.windows(2).all(|w| w[0] >= w[1]) {
        return v;
    }
    warnings.push("entries sorted in decreasing order before analysis".into());
    v.sorted().0
}

pub fn cmd_analyze(cat: &ConstraintCatalog, input: &VectorFile, opts: &AnalyzeOptions) -> Result<Outcome> {
    let s = input.setting;
    for &dp in &opts.d_prime {
        if dp == 0 || dp > s.d() {
            return Err(Error::Invalid(format!("d' = {dp} outside 1..={}", s.d())));
        }
    }
    let lookup = cat.lookup(s.key());
    let polytope = match &lookup {
        Ok(_) => Some(spectral_polytope(&s, cat)?),
        Err(Error::NotCovered(_)) => None,
        Err(e) => return Err(e.clone()),
    };
    let mut exit = EXIT_OK;
    let mut rows = Vec::new();
    for (line, values) in &input.vectors {
        let mut warnings = Vec::new();
        let check = validate(&s, &OccupationVector::orbital(values.clone()), &opts.norm_tol);
        if !check.is_valid() {
            exit = exit.max(EXIT_INVALID);
        }
        let v = sorted_input(values, &mut warnings);
        let mut row = json!({
            "line": line,
            "lambda": exact_list(values),
            "valid": check.is_valid(),
            "violations": check.violations.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        });
        match &polytope {
            None => {
                exit = exit.max(EXIT_NOT_COVERED);
                row["status"] = json!("NOT_APPLICABLE");
                row["gpcs"] = json!([]);
            }
            Some(p) => {
                let rep = distance_report(p, &v)?;
                let gpcs: Vec<Value> = rep
                    .entries
                    .iter()
                    .map(|e| {
                        let c = p.gpc_facets().into_iter().find(|(i, _)| *i == e.index).map(|x| x.1);
                        json!({
                            "index": e.index,
                            "constraint": c.map(|c| c.to_string()),
                            "residual": exact(&e.residual),
                            "hyperplane_distance": exact(&e.hyperplane_distance),
                            "facet_distance": match &e.facet_distance {
                                Distance::Value(x) => exact(x),
                                Distance::EmptyFace => json!("EMPTY_FACE"),
                            },
                            "flag": pin_flag(&e.residual, &opts.qp_tol),
                        })
                    })
                    .collect();
                row["status"] = json!("OK");
                row["gpcs"] = json!(gpcs);
                row["f_min"] = rep.min_facet_distance.as_ref().map_or(Value::Null, exact);
                row["argmin"] = json!(rep.argmin);
            }
        }
        let mut levels = Vec::new();
        for &dp in &opts.d_prime {
            levels.push(match bounds(&v, &s, dp, cat) {
                Ok(t) => json!({
                    "d_prime": dp,
                    "status": "OK",
                    "truncated": exact_list(&t.truncated),
                    "epsilon_prime": exact(&t.epsilon_prime),
                    "f_min_prime": exact(&t.f_min_prime),
                    "achieving_gpc": t.achieving_gpc,
                    "lower_bound": exact(&t.lower_bound),
                    "lower_gpc": t.lower_gpc,
                    "alpha_star": exact(&t.alpha_star),
                    "upper_bound": exact(&t.upper_bound),
                }),
                Err(e @ (Error::NotCovered(_) | Error::EmptyFace)) => {
                    json!({ "d_prime": dp, "status": "NOT_APPLICABLE", "reason": e.to_string() })
                }
                Err(e) => return Err(e),
            });
        }
        if !opts.d_prime.is_empty() {
            row["truncation"] = json!(levels);
        }
        row["warnings"] = json!(warnings);
        rows.push(row);
    }
    let report = json!({
        "setting": setting_json(&s),
        "provenance": lookup.as_ref().map(|l| l.provenance.clone()).unwrap_or_else(|e| e.to_string()),
        "qp_tol": exact(&opts.qp_tol),
        "vectors": rows,
    });
    Ok(Outcome { report, exit })
}

pub fn cmd_qparam(cat: &ConstraintCatalog, input: &VectorFile, variant: Variant) -> Result<Outcome> {
    let s = input.setting;
    let eval = match QEvaluator::new(&s, variant, cat, builtin_intersections()) {
        Ok(e) => e,
        Err(e @ Error::NotCovered(_)) => {
            let report = json!({
                "setting": setting_json(&s),
                "variant": variant.to_string(),
                "status": "NOT_APPLICABLE",
                "reason": e.to_string(),
                "vectors": [],
            });
            return Ok(Outcome { report, exit: EXIT_NOT_COVERED });
        }
        Err(e) => return Err(e),
    };
    let mut rows = Vec::new();
    for (line, values) in &input.vectors {
        let mut warnings = Vec::new();
        let v = sorted_input(values, &mut warnings);
        let rep = eval.q_global(&v)?;
        warnings.extend(rep.warnings.iter().cloned());
        let gpcs: Vec<Value> = rep
            .gpcs
            .iter()
            .map(|g| {
                let faces: Vec<Value> = g
                    .faces
                    .iter()
                    .map(|f| {
                        json!({
                            "face": f.face_id,
                            "c": exact(&f.c),
                            "face_distance": exact(&f.face_distance),
                            "ratio": f.ratio.as_ref().map_or(Value::Null, exact),
                            "Q": qvalue(f.value),
                        })
                    })
                    .collect();
                json!({
                    "index": g.index,
                    "facet_distance": g.facet_distance.as_ref().map_or(Value::Null, exact),
                    "Q": qvalue(g.value),
                    "faces": faces,
                })
            })
            .collect();
        rows.push(json!({
            "line": line,
            "lambda": exact_list(values),
            "Q": qvalue(rep.value),
            "gpcs": gpcs,
            "warnings": warnings,
        }));
    }
    let report = json!({
        "setting": setting_json(&s),
        "variant": variant.to_string(),
        "status": "OK",
        "vectors": rows,
    });
    Ok(Outcome { report, exit: EXIT_OK })
}

fn weight_json(w: &Weight) -> Value {
    json!({ "weight": w.occupations, "multiplicity": w.multiplicity })
}

fn selection_json(r: &SelectionResult) -> Value {
    json!({
        "selected": r.selected.iter().map(weight_json).collect::<Vec<_>>(),
        "excluded": r.excluded.iter().map(weight_json).collect::<Vec<_>>(),
        "pinned_dimension": r.pinned_dimension,
    })
}

pub fn cmd_selection(cat: &ConstraintCatalog, s: &Setting, indices: &[usize]) -> Result<Outcome> {
    let lookup = cat.lookup(s.key())?;
    let chosen: Vec<usize> = if indices.is_empty() {
        lookup.inequalities().map(|(i, _)| i).collect()
    } else {
        indices.to_vec()
    };
    let mut gpcs = Vec::new();
    let mut picked = Vec::new();
    for &i in &chosen {
        let c = lookup
            .gpcs
            .get(i.wrapping_sub(1))
            .ok_or_else(|| Error::Invalid(format!("{} has no GPC {i}", s.key())))?;
        let mut entry = selection_json(&select_joint(std::slice::from_ref(c), s)?);
        entry["index"] = json!(i);
        entry["constraint"] = json!(c.to_string());
        gpcs.push(entry);
        picked.push(c.clone());
    }
    let lattice = weight_lattice(s)?;
    let mut report = json!({
        "setting": setting_json(s),
        "sector_dimension": sector_dimension(s)?,
        "lattice": lattice.iter().map(weight_json).collect::<Vec<_>>(),
        "gpcs": gpcs,
        "interior": interior_weights(s, cat)?.iter().map(weight_json).collect::<Vec<_>>(),
    });
    if picked.len() > 1 {
        let mut joint = selection_json(&select_joint(&picked, s)?);
        joint["indices"] = json!(chosen);
        report["joint"] = joint;
    }
    Ok(Outcome { report, exit: EXIT_OK })
}
