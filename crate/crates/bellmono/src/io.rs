//! File formats: two-qubit state and Bell-value JSON, sweep / histogram /
//! convergence CSV, and the sampling summary.
//!
//! Floats in CSV are printed with 12 significant digits. Files are written
//! to a temporary sibling and renamed into place.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use bellmono_core::chsh::{BellSetting, BellValue};
use bellmono_core::qstate::TwoQubitState;
use bellmono_core::sampling::{ConvergenceTable, SampleStats};
use bellmono_core::spinchain::SweepResult;
use bellmono_core::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error(transparent)]
    Invalid(#[from] bellmono_core::Error),
}

/// `x` with 12 significant digits, `%g` style: positional notation for
/// exponents in `[-5, 12)`, scientific otherwise, trailing zeros removed.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: usize = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS as i32).contains(&exp) {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory followed by a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), FormatError> {
    let io_err = |source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn read_to_string(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// Parses `{"dim": 4, "re": [[..]], "im": [[..]]}` and checks every density
/// operator invariant.
pub fn parse_state(json: &str) -> Result<TwoQubitState, FormatError> {
    let file: StateFile = serde_json::from_str(json)?;
    if file.dim != 4 {
        return Err(FormatError::Schema(format!(
            "dim must be 4, got {}",
            file.dim
        )));
    }
    for (name, m) in [("re", &file.re), ("im", &file.im)] {
        if m.len() != 4 || m.iter().any(|row| row.len() != 4) {
            return Err(FormatError::Schema(format!("{name} must be a 4x4 array")));
        }
    }
    let mut matrix = [[Complex64::new(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            matrix[r][c] = Complex64::new(file.re[r][c], file.im[r][c]);
        }
    }
    Ok(TwoQubitState::new(matrix)?)
}

pub fn read_state(path: &Path) -> Result<TwoQubitState, FormatError> {
    parse_state(&read_to_string(path)?)
}

pub fn state_to_json(state: &TwoQubitState) -> String {
    let m = state.matrix();
    let file = StateFile {
        dim: 4,
        re: m
            .iter()
            .map(|row| row.iter().map(|z| z.re).collect())
            .collect(),
        im: m
            .iter()
            .map(|row| row.iter().map(|z| z.im).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable") + "\n"
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingJson {
    pub a: [f64; 3],
    pub a_prime: [f64; 3],
    pub b: [f64; 3],
    pub b_prime: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellJson {
    pub value: f64,
    pub u: f64,
    pub u_prime: f64,
    pub setting: Option<SettingJson>,
}

impl From<&BellValue> for BellJson {
    fn from(b: &BellValue) -> Self {
        BellJson {
            value: b.value,
            u: b.u,
            u_prime: b.u_prime,
            setting: b.setting.map(|s| SettingJson {
                a: s.a(),
                a_prime: s.a_prime(),
                b: s.b(),
                b_prime: s.b_prime(),
            }),
        }
    }
}

impl BellJson {
    /// Back to a [`BellValue`], re-validating the setting directions.
    pub fn to_value(&self) -> Result<BellValue, FormatError> {
        let setting = match &self.setting {
            Some(s) => Some(BellSetting::new(s.a, s.a_prime, s.b, s.b_prime)?),
            None => None,
        };
        Ok(BellValue {
            value: self.value,
            u: self.u,
            u_prime: self.u_prime,
            setting,
        })
    }
}

pub fn bell_to_json(value: &BellValue) -> String {
    serde_json::to_string_pretty(&BellJson::from(value)).expect("serializable") + "\n"
}

pub const SWEEP_HEADER: &str = "j2_over_j1,B12,B23,dB12,dB23,Bs2,energy,residual,flags";

pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for (k, p) in result.points.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_sig(p.ratio),
            fmt_sig(p.b12),
            fmt_sig(p.b23),
            fmt_sig(result.db12[k]),
            fmt_sig(result.db23[k]),
            fmt_sig(p.bs),
            fmt_sig(p.energy),
            fmt_sig(p.residual),
            p.flag_label()
        );
    }
    out
}

pub const HISTOGRAM_HEADER: &str = "bin_lo,bin_hi,count,frequency";

pub fn histogram_csv(stats: &SampleStats) -> String {
    let mut out = String::from(HISTOGRAM_HEADER);
    out.push('\n');
    for (bin, freq) in stats.histogram.iter().zip(stats.frequencies()) {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_sig(bin.lo),
            fmt_sig(bin.hi),
            bin.count,
            fmt_sig(freq)
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingSummary {
    pub n: usize,
    pub samples: u64,
    pub mean: f64,
    pub stddev: f64,
    pub bound: f64,
    #[serde(rename = "saturation_fraction_0.9")]
    pub saturation_fraction_0_9: f64,
    pub ensemble: String,
    pub seed: u64,
}

impl From<&SampleStats> for SamplingSummary {
    fn from(s: &SampleStats) -> Self {
        SamplingSummary {
            n: s.n_qubits,
            samples: s.count,
            mean: s.mean,
            stddev: s.stddev(),
            bound: s.bound,
            saturation_fraction_0_9: s.saturation_fraction(0.9).expect("0.9 is tracked"),
            ensemble: s.ensemble.kind.name().into(),
            seed: s.ensemble.seed,
        }
    }
}

pub fn summary_json(stats: &SampleStats) -> String {
    serde_json::to_string_pretty(&SamplingSummary::from(stats)).expect("serializable") + "\n"
}

/// Header of the convergence CSV for the given qubit counts.
pub fn convergence_header(n_qubits: &[usize]) -> String {
    let mut h = String::from("ensemble,samples");
    for n in n_qubits {
        let _ = write!(h, ",N{n}");
    }
    h
}

/// One row per checkpoint with the running mean for each qubit count; rows
/// of several tables are concatenated under one header.
pub fn convergence_csv(tables: &[ConvergenceTable]) -> String {
    let Some(first) = tables.first() else {
        return String::new();
    };
    let mut out = convergence_header(&first.n_qubits);
    out.push('\n');
    for t in tables {
        for (c, row) in t.checkpoints.iter().zip(&t.rows) {
            let _ = write!(out, "{},{}", t.ensemble.kind.name(), c);
            for cell in row {
                let _ = write!(out, ",{}", fmt_sig(cell.mean));
            }
            out.push('\n');
        }
    }
    out
}
