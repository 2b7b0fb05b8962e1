//! Serializable exact-nonvanishing certificates shared by the tube and
//! anchor engines. A certificate records, order by order, why a monic
//! relation among the operator iterates of the position vector cannot
//! vanish: each application of the operator reaches a strictly higher
//! pole, and the coefficient sitting at the new pole is a nonzero exact
//! rational.

use crate::report::RatJson;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMode {
    Anchor,
    Tube,
}

/// One excluded relation order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateStep {
    pub order: u32,
    /// Pole order of the term only the top iterate produces.
    pub lead_exponent: u32,
    pub lead_coefficient: RatJson,
    pub nonzero: bool,
    /// Largest pole order any lower iterate reaches.
    pub lower_exponent: u32,
    /// The lead strictly clears everything below it.
    pub separated: bool,
}

impl CertificateStep {
    pub fn holds(&self) -> bool {
        self.nonzero && self.separated && self.lower_exponent < self.lead_exponent
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InfiniteTypeCertificate {
    pub mode: CertificateMode,
    /// Highest relation order excluded.
    pub order: u32,
    /// The relation whose impossibility is certified, in the report's own
    /// notation.
    pub relation: String,
    pub steps: Vec<CertificateStep>,
    pub pass: bool,
    /// For the tube: the constant-curvature, zero-torsion branch where the
    /// generic leading term degenerates, certified separately on the
    /// anchor ring.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate_branch: Option<Box<InfiniteTypeCertificate>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl InfiniteTypeCertificate {
    /// The step at the highest certified order.
    pub fn final_step(&self) -> &CertificateStep {
        self.steps
            .last()
            .expect("certificates carry at least one step")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn serializes_with_exact_pivots() {
        let cert = InfiniteTypeCertificate {
            mode: CertificateMode::Anchor,
            order: 1,
            relation: "c0*x + L(x) = const".into(),
            steps: vec![CertificateStep {
                order: 1,
                lead_exponent: 2,
                lead_coefficient: RatJson::from(&rat(1)),
                nonzero: true,
                lower_exponent: 0,
                separated: true,
            }],
            pass: true,
            degenerate_branch: None,
            note: None,
        };
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.contains("\"mode\":\"anchor\""));
        assert!(json.contains("\"num\":\"1\""));
        assert!(!json.contains("degenerate_branch"));
        let back: InfiniteTypeCertificate = serde_json::from_str(&json).unwrap();
        assert!(back.final_step().holds());
    }
}
