//! Fast-growing radius sequences, delivered as `ln rₙ`.
//!
//! A sequence that eventually dominates every computable function can be
//! defined by diagonalizing over an enumeration of all recursive
//! functions, but it cannot be evaluated. Everything downstream is
//! parametric in the sequence, so this module supplies computable
//! stand-ins behind one interface; see [`diagonalizer_doc`].

use std::fmt;
use std::path::Path;

use crate::hgeom::LogScalar;

/// Step budget for one Ackermann evaluation.
pub const ACKERMANN_STEP_CAP: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GrowthError {
    #[error("table oracle has {len} entries; index {index} is out of range")]
    TableOutOfRange { index: usize, len: usize },
    #[error("Ackermann A({m}, {n}) exceeded the cap of {cap} evaluation steps")]
    StepCapExceeded { m: u64, n: u64, cap: u64 },
    #[error("table line {line}: {reason}")]
    BadTable { line: usize, reason: String },
    #[error("could not read table {path}: {reason}")]
    Io { path: String, reason: String },
}

/// A map `n ↦ ln rₙ`, strictly increasing, with `ln r₀ ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum GrowthOracle {
    /// `ln rₙ = T(n)` with `T(0) = 1`, `T(n) = 2^{T(n−1)}`.
    Tower,
    /// `ln rₙ = A(m, n)`, the two-argument Ackermann function.
    AckermannLog { m: u64 },
    /// Explicit values of `ln rₙ`.
    Table { values: Vec<f64> },
}

impl GrowthOracle {
    /// Validated table oracle.
    pub fn table(values: Vec<f64>) -> Result<Self, GrowthError> {
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(GrowthError::BadTable {
                    line: i + 1,
                    reason: format!("value {v} is not finite"),
                });
            }
        }
        if let Some(first) = values.first() {
            if *first < 0.0 {
                return Err(GrowthError::BadTable {
                    line: 1,
                    reason: format!("ln r0 = {first} is negative"),
                });
            }
        }
        if let Some(i) = values.windows(2).position(|w| w[1] <= w[0]) {
            return Err(GrowthError::BadTable {
                line: i + 2,
                reason: "values are not strictly increasing".into(),
            });
        }
        Ok(GrowthOracle::Table { values })
    }

    /// Parses a table: one decimal `ln rₙ` per line, line `n + 1` holding
    /// index `n`. Trailing blank lines are ignored.
    pub fn parse_table(text: &str) -> Result<Self, GrowthError> {
        let lines: Vec<&str> = text.trim_end().lines().collect();
        let mut values = Vec::with_capacity(lines.len());
        for (i, line) in lines.iter().enumerate() {
            let v: f64 = line.trim().parse().map_err(|_| GrowthError::BadTable {
                line: i + 1,
                reason: format!("'{}' is not a decimal number", line.trim()),
            })?;
            values.push(v);
        }
        Self::table(values)
    }

    pub fn load_table(path: &Path) -> Result<Self, GrowthError> {
        let text = std::fs::read_to_string(path).map_err(|e| GrowthError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::parse_table(&text)
    }

    /// Short name used in leaf files and reports.
    pub fn kind_name(&self) -> &'static str {
        match self {
            GrowthOracle::Tower => "tower",
            GrowthOracle::AckermannLog { .. } => "ackermann",
            GrowthOracle::Table { .. } => "table",
        }
    }

    /// `ln rₙ`.
    pub fn log_radius(&self, n: usize) -> Result<LogScalar, GrowthError> {
        match self {
            GrowthOracle::Tower => Ok(tower_log(n)),
            GrowthOracle::AckermannLog { m } => {
                Ok(match ackermann(*m, n as u64, ACKERMANN_STEP_CAP)? {
                    Some(a) => LogScalar::from_log(a as f64),
                    None => LogScalar::saturated(),
                })
            }
            GrowthOracle::Table { values } => values
                .get(n)
                .map(|v| LogScalar::from_log(*v))
                .ok_or(GrowthError::TableOutOfRange {
                    index: n,
                    len: values.len(),
                }),
        }
    }
}

impl fmt::Display for GrowthOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthOracle::Tower => write!(f, "tower"),
            GrowthOracle::AckermannLog { m } => write!(f, "ackermann:{m}"),
            GrowthOracle::Table { values } => write!(f, "table[{}]", values.len()),
        }
    }
}

/// `T(n)` as a log-scalar: exact through `T(4) = 65536`, saturated after.
fn tower_log(n: usize) -> LogScalar {
    let mut t = 1.0f64;
    for _ in 0..n {
        t = 2f64.powf(t);
        if t.is_infinite() {
            return LogScalar::saturated();
        }
    }
    LogScalar::from_log(t)
}

/// Ackermann's function `A(m, n)`, or `None` once the value overflows
/// `u64` (far beyond any representable radius).
///
/// Runs on an explicit stack of pending first arguments, so deep recursion
/// costs heap rather than call stack. Rows `m ≤ 3` use their closed forms.
pub fn ackermann(m: u64, n: u64, step_cap: u64) -> Result<Option<u64>, GrowthError> {
    let mut stack = vec![m];
    let mut v = Some(n);
    let mut steps = 0u64;
    while let Some(a) = stack.pop() {
        steps += 1;
        if steps > step_cap {
            return Err(GrowthError::StepCapExceeded { m, n, cap: step_cap });
        }
        let Some(b) = v else {
            // overflow is absorbing for every row
            continue;
        };
        match a {
            0 => v = b.checked_add(1),
            1 => v = b.checked_add(2),
            2 => v = b.checked_mul(2).and_then(|x| x.checked_add(3)),
            3 => v = (b < 61).then(|| (1u64 << (b + 3)) - 3),
            _ if b == 0 => {
                stack.push(a - 1);
                v = Some(1);
            }
            _ => {
                stack.push(a - 1);
                stack.push(a);
                v = Some(b - 1);
            }
        }
    }
    Ok(v)
}

/// What the computable oracles stand in for, and why none of them is the
/// real thing.
pub fn diagonalizer_doc() -> &'static str {
    "The leaf needs radii r_n with ln r_n eventually larger than f(n) for \
every computable f. Enumerating the partial recursive functions f_0, f_1, ... \
and setting ln r_n = 1 + n + max over i <= n of f_i(n) (over those that halt) \
gives such a sequence, but deciding which f_i(n) halt is the halting problem, \
so the sequence is not computable. Any program can only supply a computable \
stand-in, which some computable function eventually dominates. Three are \
offered: the tower (ln r_n = T(n), T(0) = 1, T(n) = 2^T(n-1)), the \
ackermann oracle (ln r_n = A(m, n) for a fixed m), and a table oracle reading \
ln r_n from a file. The construction only ever consumes finitely many \
values, so the geometry of a built leaf is the same whichever sequence they \
come from."
}
