use serde_json::{json, Value};
use spin_gpc::rational::parse_rational;
use spin_gpc::sandbox::{
    bd_orbital_condition, bd_residual_table, borland_dennis_state, flow, natural_occupations_tol, orbital_1rdm,
    parse_state, s_squared_expectation, seeded_state, spin_orbital_1rdm, verify_variance, FlowOptions, FlowResult,
    SectorState,
};
use spin_gpc::{ConstraintCatalog, Error, LinearConstraint, Result, Setting};

use crate::commands::{setting_json, Outcome, EXIT_OK};
use crate::report::{exact, exact_list, float, float_list};

/// Where a sandbox state comes from.
pub enum StateSource {
    File(String),
    Random { setting: Setting, seed: u64 },
    BorlandDennis { epsilon: String, generic: bool },
}

pub fn load_state(src: &StateSource) -> Result<SectorState> {
    match src {
        StateSource::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{path}: {e}")))?;
            parse_state(&text)
        }
        StateSource::Random { setting, seed } => seeded_state(setting, *seed),
        StateSource::BorlandDennis { epsilon, generic } => {
            let eps = parse_rational(epsilon).map_err(|e| Error::Invalid(e.to_string()))?;
            borland_dennis_state(&eps, *generic)
        }
    }
}

fn gpc_of(cat: &ConstraintCatalog, s: &Setting, index: usize) -> Result<LinearConstraint> {
    let lookup = cat.lookup(s.key())?;
    let c = lookup
        .gpcs
        .get(index.wrapping_sub(1))
        .ok_or_else(|| Error::Invalid(format!("{} has no GPC {index}", s.key())))?;
    if c.is_equality() {
        return Err(Error::Invalid(format!("GPC {index} of {} is an equality", s.key())));
    }
    Ok(c.clone())
}

pub fn cmd_rdm(psi: &SectorState, eig_tol: f64) -> Result<Outcome> {
    let g = orbital_1rdm(psi);
    let d = psi.setting.d();
    let part = |f: fn(&spin_gpc::sandbox::C64) -> f64| -> Value {
        Value::Array(
            (0..d)
                .map(|i| float_list(&(0..d).map(|j| f(&g.matrix[(i, j)])).collect::<Vec<_>>()))
                .collect(),
        )
    };
    let natural = natural_occupations_tol(&g.matrix, eig_tol)?;
    let spin = natural_occupations_tol(&spin_orbital_1rdm(psi), eig_tol)?;
    let gap = natural.min_gap();
    let mut warnings = Vec::new();
    if gap < eig_tol {
        warnings.push(format!("DEGENERACY: natural occupations closer than {eig_tol:e}"));
    }
    let report = json!({
        "setting": setting_json(&psi.setting),
        "s_squared": float(s_squared_expectation(psi)),
        "trace": float(g.trace()),
        "rdm_real": part(|z| z.re),
        "rdm_imag": part(|z| z.im),
        "occupations": float_list(&natural.occupations),
        "spin_orbital_occupations": float_list(&spin.occupations),
        "min_gap": float(gap),
        "warnings": warnings,
    });
    Ok(Outcome { report, exit: EXIT_OK })
}

pub fn run_flow(cat: &ConstraintCatalog, psi: &SectorState, gpc: usize, opts: &FlowOptions) -> Result<FlowResult> {
    let c = gpc_of(cat, &psi.setting, gpc)?;
    flow(&c, psi, opts)
}

/// `t,D,variance,delta,bound` rows.
pub fn flow_csv(r: &FlowResult) -> String {
    let mut out = String::from("t,D,variance,delta,bound\n");
    for s in &r.samples {
        let cells = [s.t, s.d, s.variance, s.delta, r.bound].map(|x| float(x).to_string());
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn flow_json(r: &FlowResult, psi: &SectorState, gpc: usize) -> Value {
    let samples: Vec<Value> = r
        .samples
        .iter()
        .map(|s| json!({ "t": float(s.t), "D": float(s.d), "variance": float(s.variance), "delta": float(s.delta) }))
        .collect();
    json!({
        "setting": setting_json(&psi.setting),
        "gpc": gpc,
        "D0": float(r.d0),
        "bound": float(r.bound),
        "stop": format!("{:?}", r.stop),
        "steps": r.steps,
        "degenerate_steps": r.degenerate_steps,
        "samples": samples,
        "warnings": r.warnings,
    })
}

pub fn cmd_verify_variance(
    cat: &ConstraintCatalog,
    states: &[(String, SectorState)],
    gpc: usize,
    dt: f64,
) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for (label, psi) in states {
        let c = gpc_of(cat, &psi.setting, gpc)?;
        let chk = verify_variance(&c, psi, dt)?;
        worst = worst.max(chk.relative_residual);
        rows.push(json!({
            "state": label,
            "D": float(chk.d),
            "variance": float(chk.variance),
            "derivative": float(chk.derivative),
            "relative_residual": float(chk.relative_residual),
            "degenerate": chk.degenerate,
        }));
    }
    let report = json!({
        "gpc": gpc,
        "dt": float(dt),
        "checks": rows,
        "max_relative_residual": float(worst),
    });
    Ok(Outcome { report, exit: EXIT_OK })
}

pub fn cmd_bd(epsilon: &str, generic: bool) -> Result<Outcome> {
    let eps = parse_rational(epsilon).map_err(|e| Error::Invalid(e.to_string()))?;
    let t = bd_residual_table(&eps)?;
    let mut table = serde_json::Map::new();
    for (name, v) in t.rows() {
        table.insert(name.to_string(), exact(v));
    }
    let psi = borland_dennis_state(&eps, generic)?;
    let cond = bd_orbital_condition(&psi)?;
    let report = json!({
        "epsilon": exact(&t.epsilon),
        "generic_terms": generic,
        "residuals": table,
        "spin_orbital_occupations": exact_list(&t.spin_orbital),
        "orbital_occupations": exact_list(&t.orbital),
        "orbital_condition": {
            "terms": float_list(&cond.terms),
            "slack": float(cond.slack),
            "spin_up": float_list(&cond.spin_up),
            "spin_down": float_list(&cond.spin_down),
        },
    });
    Ok(Outcome { report, exit: EXIT_OK })
}
