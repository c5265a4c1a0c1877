use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

/// A positive magnitude carried as its natural logarithm.
///
/// Radii along the outer spikes of a leaf are far beyond `f64` range
/// (`ln r` reaches 65536 for the tower oracle), so nothing in this crate
/// ever stores the exponentiated value. Two limits apply:
///
/// * the stored log itself overflowed (`+inf`, or a tower level beyond
///   `f64`): the value is **saturated**, `log_value` is pinned to
///   [`LogScalar::SATURATED_LOG`], and every operation propagates the flag;
/// * the log is finite but above [`LogScalar::EXP_LIMIT`]: the value is
///   exact in log form but cannot be turned back into a plain `f64`, and
///   [`LogScalar::to_f64`] reports that instead of overflowing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogScalar {
    log_value: f64,
    saturated: bool,
}

impl LogScalar {
    /// Largest finite log; the pinned value of a saturated scalar.
    pub const SATURATED_LOG: f64 = f64::MAX;
    /// Largest log that may still be exponentiated into a plain `f64`.
    pub const EXP_LIMIT: f64 = 7.0e2;

    pub const ONE: LogScalar = LogScalar {
        log_value: 0.0,
        saturated: false,
    };

    /// Builds from a natural log. `+inf` (or NaN) saturates.
    pub fn from_log(log_value: f64) -> Self {
        if log_value.is_nan() || log_value == f64::INFINITY {
            Self::saturated()
        } else {
            LogScalar {
                log_value,
                saturated: false,
            }
        }
    }

    /// Builds from a plain positive value; zero maps to `log = -inf`.
    pub fn from_value(value: f64) -> Self {
        debug_assert!(value >= 0.0, "LogScalar holds nonnegative magnitudes");
        if value.is_infinite() {
            Self::saturated()
        } else {
            LogScalar {
                log_value: value.ln(),
                saturated: false,
            }
        }
    }

    pub fn saturated() -> Self {
        LogScalar {
            log_value: Self::SATURATED_LOG,
            saturated: true,
        }
    }

    pub fn log_value(&self) -> f64 {
        self.log_value
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// Whether `exp(log_value)` fits a plain `f64`.
    pub fn is_representable(&self) -> bool {
        !self.saturated && self.log_value <= Self::EXP_LIMIT
    }

    /// The plain value, or `None` above the exponentiation limit.
    pub fn to_f64(&self) -> Option<f64> {
        self.is_representable().then(|| self.log_value.exp())
    }

    /// Sum of magnitudes, by log-add-exp.
    pub fn add(self, other: LogScalar) -> LogScalar {
        if self.saturated || other.saturated {
            return Self::saturated();
        }
        let (hi, lo) = if self.log_value >= other.log_value {
            (self.log_value, other.log_value)
        } else {
            (other.log_value, self.log_value)
        };
        if lo == f64::NEG_INFINITY {
            return LogScalar::from_log(hi);
        }
        LogScalar::from_log(hi + (lo - hi).exp().ln_1p())
    }

    /// Scales the magnitude by a positive factor given as its log.
    pub fn scale_by_log(self, log_factor: f64) -> LogScalar {
        if self.saturated {
            return self;
        }
        LogScalar::from_log(self.log_value + log_factor)
    }

    /// Total order on the represented magnitudes; saturated sorts last.
    pub fn total_cmp(&self, other: &LogScalar) -> Ordering {
        match (self.saturated, other.saturated) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => self.log_value.total_cmp(&other.log_value),
        }
    }
}

impl Mul for LogScalar {
    type Output = LogScalar;

    /// Multiplication of magnitudes is addition of logs.
    fn mul(self, rhs: LogScalar) -> LogScalar {
        if self.saturated || rhs.saturated {
            return LogScalar::saturated();
        }
        LogScalar::from_log(self.log_value + rhs.log_value)
    }
}

impl fmt::Display for LogScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.saturated {
            write!(f, "exp(saturated)")
        } else {
            write!(f, "exp({})", self.log_value)
        }
    }
}
