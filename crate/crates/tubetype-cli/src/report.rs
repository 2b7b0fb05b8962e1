//! The self-contained run report: config echo, results, summary, timings.
//!
//! Everything except `timings_ms` is a pure function of the config, so two
//! runs with the same config agree byte for byte once that key is dropped.

use std::collections::BTreeMap;

use serde::Serialize;
use tubetype::chentype::TypeVerdict;
use tubetype::report::{RatJson, ResidualReport};
use tubetype::tubecalc::{
    ClosedFormCheck, CoefficientTable, InfiniteTypeCertificate, LeadRecursionCheck,
    SecondIterateReport,
};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// One exact iterate's coefficients over the anchor-ring basis, as decimal
/// strings.
#[derive(Clone, Debug, Serialize)]
pub struct TableJson {
    pub m: u32,
    /// `d[j]` multiplies `a cos(phi) / cos^{2j+2}(t)`.
    pub d: Vec<RatJson>,
    /// Multiplies `r cos(t) cos(phi)`.
    pub r_coefficient: RatJson,
}

impl From<&CoefficientTable> for TableJson {
    fn from(t: &CoefficientTable) -> Self {
        TableJson {
            m: t.m,
            d: t.d.iter().map(RatJson::from).collect(),
            r_coefficient: RatJson::from(&t.r_coefficient),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Verify {
        checks: Vec<ResidualReport>,
    },
    Analyze {
        verdict: TypeVerdict,
    },
    Iterate {
        rows: usize,
        depth: usize,
        /// RMS of `y_k` over all rows and components, k = 0..=depth.
        column_rms: Vec<f64>,
    },
    AnchorCert {
        certificate: InfiniteTypeCertificate,
        closed_forms: Vec<ClosedFormCheck>,
        tables: Vec<TableJson>,
    },
    TubeCert {
        certificate: InfiniteTypeCertificate,
        second_iterate: SecondIterateReport,
        lead_recursion: Vec<LeadRecursionCheck>,
    },
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

impl Summary {
    pub fn tally(outcomes: impl IntoIterator<Item = bool>) -> Self {
        let mut checks = 0;
        let mut passed = 0;
        for ok in outcomes {
            checks += 1;
            if ok {
                passed += 1;
            }
        }
        Summary {
            checks,
            passed,
            failed: checks - passed,
            pass: passed == checks,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub payload: Payload,
    pub summary: Summary,
    pub timings_ms: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(
        command: &str,
        config: RunConfig,
        payload: Payload,
        summary: Summary,
        timings_ms: BTreeMap<String, f64>,
    ) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: "tubetype",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config,
            payload,
            summary,
            timings_ms,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

/// Tabular projection of the residual checks, one row per check.
pub fn checks_csv(checks: &[ResidualReport]) -> String {
    let mut out = String::from("check,surface,samples,max_rel,mean_rel,tolerance,pass\n");
    for c in checks {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.check,
            c.surface.replace(',', ";"),
            c.samples,
            c.max_rel,
            c.mean_rel,
            c.tolerance,
            c.pass
        ));
    }
    out
}

/// Flat key/value projection of a classification verdict.
pub fn verdict_csv(v: &TypeVerdict) -> String {
    let mut out = String::from("item,value\n");
    out.push_str(&format!("surface,{}\n", v.surface.replace(',', ";")));
    out.push_str(&format!("samples,{}\n", v.samples));
    out.push_str(&format!("eigen_lambda,{}\n", v.eigen.lambda));
    out.push_str(&format!("eigen_residual,{}\n", v.eigen.residual));
    for rel in &v.relations {
        out.push_str(&format!("relation_{}_residual,{}\n", rel.k, rel.residual));
    }
    for (k, rank) in v.rank.ranks.iter().enumerate() {
        out.push_str(&format!("rank_through_{k},{rank}\n"));
    }
    out.push_str(&format!("matrix_residual,{}\n", v.matrix.residual));
    out.push_str(&format!("verdict,{}\n", v.verdict.label()));
    if let Some(cert) = &v.certificate {
        out.push_str(&format!("certificate_order,{}\n", cert.order));
        out.push_str(&format!("certificate_pass,{}\n", cert.pass));
    }
    out
}

/// One row per exact anchor coefficient: `m,term,num,den`.
pub fn tables_csv(tables: &[TableJson]) -> String {
    let mut out = String::from("m,term,num,den\n");
    for t in tables {
        for (j, d) in t.d.iter().enumerate() {
            out.push_str(&format!("{},d{},{},{}\n", t.m, j, d.num, d.den));
        }
        out.push_str(&format!(
            "{},r,{},{}\n",
            t.m, t.r_coefficient.num, t.r_coefficient.den
        ));
    }
    out
}

/// One row per tube iterate lead: order, value, closed form, both checks.
pub fn leads_csv(leads: &[LeadRecursionCheck]) -> String {
    let mut out = String::from(
        "lambda,coefficient_num,coefficient_den,closed_form_num,closed_form_den,\
         matches_closed_form,recursion_holds\n",
    );
    for l in leads {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            l.lambda,
            l.coefficient.num,
            l.coefficient.den,
            l.closed_form.num,
            l.closed_form.den,
            l.matches_closed_form,
            l.recursion_holds
        ));
    }
    out
}
