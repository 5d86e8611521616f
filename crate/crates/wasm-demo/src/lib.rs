//! Browser bindings for the Sidon design toolkit.
//!
//! Every exported function returns a JSON string. Failures come back as
//! `{"error": "..."}` so the page never has to catch a thrown value.

use serde_json::{json, Value};
use sidon_designs::bh_design::{
    bodmann_haas, default_potential_tol, frame_potential_characters, verify_direct_with_cap,
    verify_frame_potential,
};
use sidon_designs::sidon::{self, Family, SidonSet};
use sidon_designs::zauner_bounds::{self, RowClass, SicDimensionData, DEFAULT_K_MAX};
use wasm_bindgen::prelude::*;

/// Field tables larger than this are refused in the browser.
pub const FIELD_CAP: u64 = 1 << 18;
/// Largest dimension for which the dense check runs.
pub const DENSE_CAP: usize = 24;
/// Largest group whose difference counts are reported.
pub const DIFFERENCE_CAP: u64 = 1 << 16;
pub const TABLE_DMAX: u64 = 400;

fn make_set(family: &str, q: u32, remove: u32, literal: bool) -> Result<SidonSet, String> {
    let family: Family = family.parse()?;
    let q = u64::from(q);
    let set = if literal && family == Family::Bose {
        sidon::bose_trace_zero(q)
    } else {
        sidon::build_with_cap(family, q, FIELD_CAP)
    }
    .map_err(|e| e.to_string())?;
    set.remove_points(u64::from(remove)).map_err(|e| e.to_string())
}

/// How often each group element occurs as a difference `s - s'` with
/// `s != s'`. A set is Sidon exactly when no count exceeds one.
fn difference_counts(set: &SidonSet) -> Option<Vec<u32>> {
    let g = set.group();
    if g.order() > DIFFERENCE_CAP {
        return None;
    }
    let mut counts = vec![0u32; g.order() as usize];
    for a in set.elements() {
        for b in set.elements() {
            if a != b {
                let diff = g.sub(a, b).ok()?;
                counts[g.index_of(&diff).ok()? as usize] += 1;
            }
        }
    }
    Some(counts)
}

pub fn sidon_set_value(family: &str, q: u32, remove: u32, literal: bool) -> Result<Value, String> {
    let set = make_set(family, q, remove, literal)?;
    let g = set.group();
    let (order, size) = set.parameters();
    let indices: Vec<u64> = set
        .elements()
        .iter()
        .map(|e| g.index_of(e).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let elements: Vec<&[u64]> = set.elements().iter().map(|e| e.residues()).collect();
    let violation = set
        .first_violation()
        .map(|[a, b, c, d]| format!("{a} + {b} = {c} + {d}"));
    Ok(json!({
        "label": set.label(),
        "moduli": g.moduli(),
        "order": order,
        "size": size,
        "elements": elements,
        "indices": indices,
        "is_sidon": set.is_sidon(),
        "violation": violation,
        "difference_counts": difference_counts(&set),
    }))
}

pub fn certify_value(family: &str, q: u32, remove: u32, literal: bool) -> Result<Value, String> {
    let set = make_set(family, q, remove, literal)?;
    let design = bodmann_haas(&set).map_err(|e| e.to_string())?;
    let d = design.dim();
    let report = verify_frame_potential(&design, default_potential_tol(d));
    let direct = if d <= DENSE_CAP {
        Some(verify_direct_with_cap(&design, DENSE_CAP).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let characters = frame_potential_characters(&design).map(|(t, p)| json!({ "trace_m": t, "potential": p }));
    Ok(json!({
        "label": set.label(),
        "dim": d,
        "vectors": design.len(),
        "weight_sum": design.exact_weight_sum().map(|r| r.to_string()),
        "trace_m": report.trace_m,
        "potential": report.potential,
        "target": report.target,
        "tol": report.tol,
        "certified": report.certified,
        "direct_residual": direct,
        "character_route": characters,
    }))
}

fn class_tag(class: RowClass) -> &'static str {
    match class {
        RowClass::SicKnown => "sic",
        RowClass::Tie => "tie",
        RowClass::SidonBetter => "sidon",
        RowClass::PreviousBetter => "previous",
    }
}

pub fn bounds_table_value(dmax: u32) -> Result<Value, String> {
    let dmax = u64::from(dmax);
    if dmax > TABLE_DMAX {
        return Err(format!("dmax must be at most {TABLE_DMAX}"));
    }
    let data = SicDimensionData::bundled();
    let rows = zauner_bounds::table(dmax, &data, DEFAULT_K_MAX).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let (previous, _) = r.previous_upper();
            json!({
                "d": r.d,
                "lower": r.lower,
                "sic": r.sic,
                "previous": previous,
                "sidon": r.sidon,
                "witness": r.sidon_witness.label(),
                "best": r.best,
                "best_source": r.best_source(),
                "class": class_tag(r.class()),
            })
        })
        .collect();
    Ok(json!({ "sha256": data.sha256(), "rows": rows }))
}

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// A dense Sidon set with its difference counts.
#[wasm_bindgen]
pub fn sidon_set(family: &str, q: u32, remove: u32, literal: bool) -> String {
    respond(sidon_set_value(family, q, remove, literal))
}

/// Builds the weighted design of a Sidon set and certifies it.
#[wasm_bindgen]
pub fn certify(family: &str, q: u32, remove: u32, literal: bool) -> String {
    respond(certify_value(family, q, remove, literal))
}

/// Rows `2..=dmax` of the bounds comparison.
#[wasm_bindgen]
pub fn bounds_table(dmax: u32) -> String {
    respond(bounds_table_value(dmax))
}
