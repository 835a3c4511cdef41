//! Transcribed closed forms, shipped as JSON data files under `golden/`.
use parazeta_core::pipeline::{Frame, GoldenFormula, TMode};
use parazeta_core::symexpr::parse_expr;
use parazeta_core::{Error, Result};
use serde::{Deserialize, Serialize};

use crate::schema::{expr_from_json, ExprJson};

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct GoldenFile {
    pub id: String,
    pub group: String,
    pub parabolic: String,
    /// "xi_o", "truncated-rho" or "truncated-general".
    pub frame: String,
    /// Summands as printed, bracketed groups expanded.
    pub printed_terms: usize,
    /// The transcription in plain notation.
    pub plain: String,
    pub expr: ExprJson,
}

const FILES: &[&str] = &[
    include_str!("../golden/G2.Plong.json"),
    include_str!("../golden/G2.Pshort.json"),
    include_str!("../golden/SL2.B.json"),
    include_str!("../golden/SL3.P21.json"),
    include_str!("../golden/SL3.T-general.P12.json"),
    include_str!("../golden/SL3.T-general.P21.json"),
    include_str!("../golden/SL3.T-rho.P12.json"),
    include_str!("../golden/SL3.T-rho.P21.json"),
    include_str!("../golden/SL4.P22.json"),
    include_str!("../golden/SL4.P31.json"),
    include_str!("../golden/SL5.P32.json"),
    include_str!("../golden/SL5.P41.json"),
    include_str!("../golden/Sp4.P2e2.json"),
    include_str!("../golden/Sp4.Pe1-e2.json"),
];

pub fn frame_of(s: &str) -> Result<Frame> {
    match s {
        "xi_o" => Ok(Frame::XiO),
        "truncated-rho" => Ok(Frame::Truncated(TMode::RhoLine)),
        "truncated-general" => Ok(Frame::Truncated(TMode::General)),
        _ => Err(Error::Parse(format!("unknown frame '{s}'"))),
    }
}

/// The raw data files.
pub fn golden_files() -> Result<Vec<GoldenFile>> {
    FILES.iter().map(|s| serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))).collect()
}

/// Every transcription, checked against its plain form.
pub fn golden_corpus() -> Result<Vec<GoldenFormula>> {
    golden_files()?
        .into_iter()
        .map(|f| {
            let expr = expr_from_json(&f.expr)?;
            let plain = parse_expr(&f.plain)?;
            if plain.simplify().terms != expr.simplify().terms {
                return Err(Error::Parse(format!("{}: JSON and plain forms disagree", f.id)));
            }
            Ok(GoldenFormula {
                frame: frame_of(&f.frame)?,
                id: f.id,
                group: f.group,
                parabolic: f.parabolic,
                expr,
                printed_terms: f.printed_terms,
            })
        })
        .collect()
}

/// The ξ_o-frame golden for a pair, if one exists.
pub fn golden_for(group: &str, parabolic: &str) -> Result<Option<GoldenFormula>> {
    Ok(golden_corpus()?.into_iter().find(|g| g.frame == Frame::XiO && g.group == group && g.parabolic == parabolic))
}

/// The truncated-period golden for a parabolic and mode.
pub fn golden_truncated(parabolic: &str, mode: TMode) -> Result<Option<GoldenFormula>> {
    Ok(golden_corpus()?.into_iter().find(|g| g.frame == Frame::Truncated(mode) && g.parabolic == parabolic))
}
