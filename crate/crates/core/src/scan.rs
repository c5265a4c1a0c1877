//! Extrema of a scalar function on a sample grid, refined locally.

/// Grid extrema of one scan, after refinement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extrema {
    pub min: f64,
    pub max: f64,
    pub argmin: f64,
    pub argmax: f64,
}

impl Extrema {
    /// Combines two scans; ties keep `self`, so merging in parameter order
    /// reports the lowest parameter.
    pub fn merge(self, other: Extrema) -> Extrema {
        let (min, argmin) = if other.min < self.min {
            (other.min, other.argmin)
        } else {
            (self.min, self.argmin)
        };
        let (max, argmax) = if other.max > self.max {
            (other.max, other.argmax)
        } else {
            (self.max, self.argmax)
        };
        Extrema {
            min,
            max,
            argmin,
            argmax,
        }
    }

    /// Largest `|f − center|` seen.
    pub fn max_deviation(&self, center: f64) -> f64 {
        (self.max - center).abs().max((self.min - center).abs())
    }
}

/// Rounds of local bisection run around each grid extremum.
pub const REFINE_ROUNDS: u32 = 3;

/// Scans `f` at `samples` equally spaced points of `[a, b]` (endpoints
/// included), then refines the grid minimum and maximum by halving a
/// bracket around each [`REFINE_ROUNDS`] times.
pub fn scan_interval<E, F>(f: F, a: f64, b: f64, samples: usize) -> Result<Extrema, E>
where
    F: Fn(f64) -> Result<f64, E>,
{
    let samples = samples.max(2);
    let h = (b - a) / (samples - 1) as f64;
    let at = |i: usize| if i + 1 == samples { b } else { a + h * i as f64 };
    let v0 = f(a)?;
    let mut ext = Extrema {
        min: v0,
        max: v0,
        argmin: a,
        argmax: a,
    };
    for i in 1..samples {
        let x = at(i);
        let v = f(x)?;
        if v < ext.min {
            ext.min = v;
            ext.argmin = x;
        }
        if v > ext.max {
            ext.max = v;
            ext.argmax = x;
        }
    }
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let mut step = h.abs();
    for _ in 0..REFINE_ROUNDS {
        step *= 0.5;
        for x in [ext.argmin - step, ext.argmin + step] {
            if x >= lo && x <= hi {
                let v = f(x)?;
                if v < ext.min {
                    ext.min = v;
                    ext.argmin = x;
                }
            }
        }
        for x in [ext.argmax - step, ext.argmax + step] {
            if x >= lo && x <= hi {
                let v = f(x)?;
                if v > ext.max {
                    ext.max = v;
                    ext.argmax = x;
                }
            }
        }
    }
    Ok(ext)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refinement_finds_off_grid_peak() {
        // 0.3125 is off the 11-point grid but on the third refinement level
        let peak = 0.3125;
        let f = |x: f64| Ok::<_, ()>(1.0 - (x - peak) * (x - peak));
        let coarse = scan_interval(f, 0.0, 1.0, 11).unwrap();
        assert!((coarse.argmax - peak).abs() < 1e-15);
        assert!(coarse.max > f(0.3).unwrap());
        assert_eq!(coarse.min, f(1.0).unwrap());
    }

    #[test]
    fn merge_keeps_first_on_ties() {
        let a = Extrema { min: 0.0, max: 1.0, argmin: 0.1, argmax: 0.2 };
        let b = Extrema { min: 0.0, max: 1.0, argmin: 5.0, argmax: 6.0 };
        assert_eq!(a.merge(b), a);
    }

    #[test]
    fn errors_propagate() {
        let r = scan_interval(|x| if x > 0.5 { Err(x) } else { Ok(x) }, 0.0, 1.0, 5);
        assert_eq!(r, Err(0.75));
    }
}
