//! Exact engines for the two families where the third-form operator has
//! closed-form iterates: tubes over unit-speed spines (moving-frame ring)
//! and the anchor ring (its own angle ring), plus the infinite-type
//! certificates built from their pole bookkeeping.

pub mod anchor;
pub mod certificate;
pub mod operator;

pub use anchor::{
    anchor_infinite_type_certificate, anchor_iterate_x1, anchor_iterates, anchor_position,
    apply_delta3_anchor, coefficient_table, d_closed_form_check, d_first_closed_form,
    d_last_closed_form, AnchorError, AnchorExpr, AnchorKey, ArPoly, ArVar, ClosedFormCheck,
    CoefficientTable,
};
pub use certificate::{CertificateMode, CertificateStep, InfiniteTypeCertificate};
pub use operator::{
    apply_delta3_tube, beta_power_image_check, beta_power_image_check_bounded,
    d_lambda_recursion_check, extract_beta_lead, first_iterate_expected, second_iterate_report,
    tube_infinite_type_certificate, tube_iterate, tube_lead_closed_form, tube_position, BetaLead,
    BetaPowerImageCheck, IterateSequence, LeadRecursionCheck, SecondIterateReport, TubeError,
    TubeOperator,
};
