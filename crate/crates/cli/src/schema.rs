//! Untagged mirrors of the symbol variants.
//!
//! A tagged enum buffers its body before dispatch, which drops line numbers
//! and field paths from errors. Re-reading the body as the matching plain
//! struct recovers both.

use std::path::Path;

use bergman_toeplitz::{AnalyticPoly, Atom, CircleEntry, CircularConvention, DeltaConvention, DeltaTerm, Profile};
use num_complex::Complex64;
use serde::Deserialize;

use crate::{parse_json, CliError};

#[derive(Deserialize)]
struct BoundedRadialDoc {
    #[serde(rename = "profile")]
    _profile: Profile,
}

#[derive(Deserialize)]
struct DiscreteDoc {
    #[serde(rename = "atoms")]
    _atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct CircleDoc {
    #[serde(rename = "entries")]
    _entries: Vec<CircleEntry>,
    #[serde(rename = "convention", default)]
    _convention: CircularConvention,
}

#[derive(Deserialize)]
struct DerivDeltaDoc {
    #[serde(rename = "terms")]
    _terms: Vec<DeltaTerm>,
    #[serde(rename = "convention", default)]
    _convention: DeltaConvention,
}

#[derive(Deserialize)]
struct SpectralDoc {
    #[serde(rename = "gamma")]
    _gamma: Vec<Complex64>,
}

#[derive(Deserialize)]
struct FiniteRankDoc {
    #[serde(rename = "f_list")]
    _f_list: Vec<AnalyticPoly>,
    #[serde(rename = "g_list")]
    _g_list: Vec<AnalyticPoly>,
}

/// The positioned error for a symbol body, when the plain mirror also rejects it.
pub fn locate_symbol_error(text: &str, source: &Path) -> Option<CliError> {
    let value: serde_json::Value = serde_json::from_str(text).ok()?;
    let result = match value.get("type")?.as_str()? {
        "bounded_radial" => parse_json::<BoundedRadialDoc>(text, source).map(drop),
        "discrete" => parse_json::<DiscreteDoc>(text, source).map(drop),
        "circle" => parse_json::<CircleDoc>(text, source).map(drop),
        "deriv_delta" => parse_json::<DerivDeltaDoc>(text, source).map(drop),
        "spectral" => parse_json::<SpectralDoc>(text, source).map(drop),
        "finite_rank" => parse_json::<FiniteRankDoc>(text, source).map(drop),
        _ => return None,
    };
    result.err()
}
