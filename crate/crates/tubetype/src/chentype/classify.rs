//! Orchestrated finite-type analysis of one surface: numeric fits plus, for
//! tubes and anchor rings, the exact impossibility certificate that carries
//! the real proof burden. Numeric residuals alone can only ever be evidence.

use super::fit::{
    eigen_fit, matrix_fit, minimal_relation, ChenTypeError, EigenFit, IterateMatrix, MatrixFit,
    RelationFit,
};
use super::rank::{rank_profile, RankProfile};
use crate::beltrami::MetricChoice;
use crate::geometry::{SurfaceGrid, SurfaceSpec};
use crate::par::EvalMode;
use crate::tubecalc::{
    anchor_infinite_type_certificate, tube_infinite_type_certificate, InfiniteTypeCertificate,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug)]
pub struct ClassifyConfig {
    pub nu: usize,
    pub nv: usize,
    pub exclusion: f64,
    /// Deepest numeric iterate; capped by the grid engine at 3.
    pub k_max: usize,
    pub finite_threshold: f64,
    pub infinite_threshold: f64,
    pub rank_threshold: f64,
    /// Order of the exact anchor-ring certificate, when one applies.
    pub anchor_certificate_order: u32,
    /// Order of the exact tube certificate, when one applies.
    pub tube_certificate_order: u32,
    pub mode: EvalMode,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            nu: 192,
            nv: 96,
            exclusion: 0.2,
            k_max: 3,
            finite_threshold: 1e-4,
            infinite_threshold: 1e-2,
            rank_threshold: 1e-8,
            anchor_certificate_order: 10,
            tube_certificate_order: 3,
            mode: EvalMode::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    FiniteType { k: usize, lambda: Option<f64> },
    InfiniteTypeEvidence,
    Inconclusive,
}

impl Verdict {
    pub fn label(&self) -> String {
        match self {
            Verdict::FiniteType { k, .. } => format!("finite_type_{k}"),
            Verdict::InfiniteTypeEvidence => "infinite_type_evidence".into(),
            Verdict::Inconclusive => "inconclusive".into(),
        }
    }
}

/// Full, auditable record of one classification run: every number the
/// verdict was derived from, plus the thresholds used.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypeVerdict {
    pub surface: String,
    pub samples: usize,
    pub eigen: EigenFit,
    pub relations: Vec<RelationFit>,
    pub rank: RankProfile,
    pub matrix: MatrixFit,
    pub finite_threshold: f64,
    pub infinite_threshold: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<InfiniteTypeCertificate>,
}

fn exact_certificate(
    spec: &SurfaceSpec,
    config: &ClassifyConfig,
) -> Result<Option<InfiniteTypeCertificate>, ChenTypeError> {
    match spec {
        SurfaceSpec::AnchorRing { .. } => {
            let m = config.anchor_certificate_order;
            let cert = anchor_infinite_type_certificate(m, m)
                .map_err(|e| ChenTypeError::DegenerateInput(e.to_string()))?;
            Ok(Some(cert))
        }
        SurfaceSpec::Tube { .. } => {
            let l = config.tube_certificate_order;
            let cert = tube_infinite_type_certificate(l, l + 1)
                .map_err(|e| ChenTypeError::DegenerateInput(e.to_string()))?;
            Ok(Some(cert))
        }
        _ => Ok(None),
    }
}

pub fn classify(spec: &SurfaceSpec, config: &ClassifyConfig) -> Result<TypeVerdict, ChenTypeError> {
    let grid = SurfaceGrid::build(spec, config.nu, config.nv, config.exclusion, config.mode)
        .map_err(crate::beltrami::BeltramiError::from)?;
    classify_grid(&grid, config)
}

/// Classification over an already-built grid; useful when the caller also
/// wants the grid for other checks.
pub fn classify_grid(
    grid: &SurfaceGrid,
    config: &ClassifyConfig,
) -> Result<TypeVerdict, ChenTypeError> {
    let iterates = IterateMatrix::from_grid(grid, MetricChoice::Third, config.k_max, config.mode)?;
    let eigen = eigen_fit(&iterates)?;
    let relations: Vec<RelationFit> = (1..=config.k_max)
        .map(|k| minimal_relation(&iterates, k))
        .collect::<Result<_, _>>()?;
    let rank = rank_profile(&iterates, config.rank_threshold);
    let matrix = matrix_fit(&iterates)?;
    let certificate = exact_certificate(&grid.spec, config)?;

    let verdict = if eigen.residual < config.finite_threshold {
        Verdict::FiniteType {
            k: 1,
            lambda: Some(eigen.lambda),
        }
    } else if let Some(rel) = relations
        .iter()
        .skip(1)
        .find(|r| r.residual < config.finite_threshold)
    {
        Verdict::FiniteType {
            k: rel.k,
            lambda: None,
        }
    } else if relations
        .iter()
        .all(|r| r.residual > config.infinite_threshold)
        && certificate.as_ref().is_some_and(|c| c.pass)
    {
        Verdict::InfiniteTypeEvidence
    } else {
        Verdict::Inconclusive
    };

    Ok(TypeVerdict {
        surface: grid.spec.to_string(),
        samples: iterates.rows(),
        eigen,
        relations,
        rank,
        matrix,
        finite_threshold: config.finite_threshold,
        infinite_threshold: config.infinite_threshold,
        verdict,
        certificate,
    })
}
