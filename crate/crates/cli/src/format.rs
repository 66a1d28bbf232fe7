//! File formats: configuration JSON, report JSON, trajectory CSV.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use ttdesign::designs::DesignReport;
use ttdesign::{Configuration, Field, Quaternion, Vector};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("cannot read {path}")]
    Read { path: String, source: io::Error },
    #[error("cannot write {path}")]
    Write { path: String, source: io::Error },
    #[error("malformed configuration JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown field {0:?} (expected R, C or H)")]
    UnknownField(String),
    #[error("invalid configuration: {0}")]
    Config(#[from] ttdesign::Error),
}

/// On-disk configuration: `{"field":"H","dim":2,"vectors":[[[w,x,y,z],...],...],"weights":[...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub field: String,
    pub dim: usize,
    pub vectors: Vec<Vec<[f64; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl ConfigDoc {
    pub fn from_configuration(cfg: &Configuration) -> Self {
        ConfigDoc {
            field: cfg.field().name().to_string(),
            dim: cfg.dim(),
            vectors: cfg
                .vectors()
                .iter()
                .map(|v| v.entries().iter().map(|q| q.to_array()).collect())
                .collect(),
            weights: cfg.weights().map(<[f64]>::to_vec),
        }
    }

    pub fn to_configuration(&self) -> Result<Configuration, FormatError> {
        let field: Field = self
            .field
            .parse()
            .map_err(|_| FormatError::UnknownField(self.field.clone()))?;
        let vectors = self
            .vectors
            .iter()
            .map(|v| Vector::new(v.iter().map(|&q| Quaternion::from_array(q)).collect()))
            .collect();
        Ok(Configuration::new(
            field,
            self.dim,
            vectors,
            self.weights.clone(),
        )?)
    }
}

pub fn parse_configuration(text: &str) -> Result<Configuration, FormatError> {
    serde_json::from_str::<ConfigDoc>(text)?.to_configuration()
}

pub fn read_configuration(path: &Path) -> Result<Configuration, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_configuration(&text)
}

pub fn configuration_json(cfg: &Configuration) -> String {
    serde_json::to_string_pretty(&ConfigDoc::from_configuration(cfg)).expect("plain data") + "\n"
}

pub fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Write {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DegreeDoc {
    pub r: u32,
    pub potential: f64,
    pub bound: f64,
    pub gap: f64,
    pub relative_gap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ClusterDoc {
    pub angle: f64,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReportDoc {
    pub field: String,
    pub dim: usize,
    pub n: usize,
    pub t: u32,
    pub tolerance: f64,
    pub is_design: bool,
    pub c_t: f64,
    pub potential: f64,
    pub bound: f64,
    pub gap: f64,
    pub relative_gap: f64,
    pub normalized_potential: f64,
    pub normalization_scale: f64,
    pub unit_input: bool,
    pub weighted_input: bool,
    pub zero_vectors_dropped: usize,
    pub per_r: Vec<DegreeDoc>,
    pub spectrum: Vec<ClusterDoc>,
    pub bessel_max_residual: f64,
    pub bessel_threshold: f64,
    pub cubature_max_residual: Option<f64>,
    pub hoggar_residuals: Vec<f64>,
    pub hoggar_weighted: Vec<f64>,
    pub variational_pass: bool,
    pub bessel_pass: bool,
    pub hoggar_pass: bool,
}

impl From<&DesignReport> for ReportDoc {
    fn from(r: &DesignReport) -> Self {
        ReportDoc {
            field: r.field.name().to_string(),
            dim: r.dim,
            n: r.n,
            t: r.t,
            tolerance: r.tolerance,
            is_design: r.is_design,
            c_t: r.c_t,
            potential: r.potential,
            bound: r.bound,
            gap: r.gap,
            relative_gap: r.relative_gap,
            normalized_potential: r.normalized_potential,
            normalization_scale: r.normalization.scale,
            unit_input: r.normalization.unit_input,
            weighted_input: r.normalization.weighted_input,
            zero_vectors_dropped: r.normalization.zero_vectors_dropped,
            per_r: r
                .per_r
                .iter()
                .map(|c| DegreeDoc {
                    r: c.r,
                    potential: c.potential,
                    bound: c.bound,
                    gap: c.gap,
                    relative_gap: c.relative_gap,
                })
                .collect(),
            spectrum: r
                .spectrum
                .clusters
                .iter()
                .map(|&(angle, count)| ClusterDoc { angle, count })
                .collect(),
            bessel_max_residual: r.bessel_max_residual,
            bessel_threshold: r.bessel_threshold,
            cubature_max_residual: r.cubature_max_residual,
            hoggar_residuals: r.hoggar_residuals.clone(),
            hoggar_weighted: r.hoggar_weighted.clone(),
            variational_pass: r.variational_pass,
            bessel_pass: r.bessel_pass,
            hoggar_pass: r.hoggar_pass,
        }
    }
}

/// Human-readable report.
pub fn report_table(r: &DesignReport) -> String {
    let mut s = String::new();
    let yn = |b: bool| if b { "pass" } else { "FAIL" };
    s += &format!(
        "{}^{}  n = {}  t = {}  tol = {:e}\n",
        r.field, r.dim, r.n, r.t, r.tolerance
    );
    s += &format!("design            {}\n", r.is_design);
    s += &format!("potential         {:.12}\n", r.potential);
    s += &format!("bound             {:.12}\n", r.bound);
    s += &format!("relative gap      {:.3e}\n", r.relative_gap);
    s += "  r  potential         bound             relative gap\n";
    for c in &r.per_r {
        s += &format!(
            "  {:<2} {:<17.10} {:<17.10} {:.3e}\n",
            c.r, c.potential, c.bound, c.relative_gap
        );
    }
    s += "angles:";
    for (a, k) in &r.spectrum.clusters {
        s += &format!(" {a:.9}x{k}");
    }
    s += "\n";
    s += &format!(
        "variational {}  bessel {} ({:.3e} <= {:.3e})  hoggar {}\n",
        yn(r.variational_pass),
        yn(r.bessel_pass),
        r.bessel_max_residual,
        r.bessel_threshold,
        yn(r.hoggar_pass)
    );
    if let Some(c) = r.cubature_max_residual {
        s += &format!("cubature residual {c:.3e}\n");
    }
    s
}

/// Trajectory as CSV with header `iteration,potential`.
pub fn write_trajectory<W: Write>(mut w: W, trajectory: &[(usize, f64)]) -> io::Result<()> {
    writeln!(w, "iteration,potential")?;
    for (i, p) in trajectory {
        writeln!(w, "{i},{p:e}")?;
    }
    Ok(())
}
