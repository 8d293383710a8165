//! Loading JSON arguments. Every argument is either a path to a JSON file
//! or the JSON text itself.

use std::path::Path;

use locc_core::ensembles::EnsembleDescriptor;
use locc_core::locc::LoccProtocol;
use locc_core::qstate::{BipartiteState, ComplexMatrix};
use locc_core::synth::OneWayProtocolSpec;
use locc_core::{Error, Result};
use serde::Deserialize;
use serde_json::Value;

pub fn read_json(arg: &str) -> Result<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_owned()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| Error::Domain(format!("cannot read {arg}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnsemble {
    states: Vec<BipartiteState>,
    priors: Option<Vec<f64>>,
}

/// Accepts a descriptor (`{"kind": ...}`), a raw `{states, priors}` ensemble,
/// or any report carrying an `ensemble` field, at top level or under `input`.
pub fn ensemble_descriptor(value: &Value) -> Result<EnsembleDescriptor> {
    let Some(object) = value.as_object() else {
        return Err(Error::Domain("an ensemble must be a JSON object".into()));
    };
    if object.contains_key("kind") {
        return Ok(EnsembleDescriptor::deserialize(value)?);
    }
    if object.contains_key("states") {
        let raw = RawEnsemble::deserialize(value)?;
        return Ok(EnsembleDescriptor::Explicit { states: raw.states, priors: raw.priors });
    }
    match object.get("ensemble").or_else(|| object.get("input")) {
        Some(inner) => ensemble_descriptor(inner),
        None => Err(Error::Domain("expected an ensemble descriptor, a {states, priors} object or a report with an ensemble".into())),
    }
}

/// Accepts a protocol tree (`{dim_a, dim_b, root}`), a one-way protocol
/// (`{alice_basis, bob_discriminators}`), or a report carrying a `protocol`
/// field, at top level or under `input`.
pub fn protocol(value: &Value) -> Result<LoccProtocol> {
    let Some(object) = value.as_object() else {
        return Err(Error::Domain("a protocol must be a JSON object".into()));
    };
    if object.contains_key("root") {
        return Ok(LoccProtocol::deserialize(value)?);
    }
    if object.contains_key("alice_basis") {
        return OneWayProtocolSpec::deserialize(value)?.to_protocol();
    }
    match object.get("protocol").or_else(|| object.get("input")) {
        Some(inner) => protocol(inner),
        None => Err(Error::Domain("expected a protocol tree, a one-way protocol or a report with a protocol".into())),
    }
}

/// One matrix or a list of matrices.
pub fn candidate_bases(value: &Value) -> Result<Vec<ComplexMatrix>> {
    if let Ok(single) = ComplexMatrix::deserialize(value) {
        return Ok(vec![single]);
    }
    Ok(Vec::<ComplexMatrix>::deserialize(value)?)
}
