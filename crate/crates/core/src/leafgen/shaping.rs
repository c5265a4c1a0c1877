//! Coordinate descent over the free junction derivatives of a spline
//! chain, minimizing the worst per-segment curvature defect.

pub(crate) const MAX_ITERATIONS: usize = 200;
/// Samples per segment while searching; verification uses the full count.
pub(crate) const SEARCH_SAMPLES: usize = 257;

pub(crate) struct Problem<'a> {
    pub n_segments: usize,
    /// Segments whose shape depends on parameter `j`.
    pub affects: &'a dyn Fn(usize) -> Vec<usize>,
    /// Worst defect on one segment, `inf` when the shape is inadmissible.
    pub cost: &'a dyn Fn(&[f64], usize) -> f64,
    /// Parameters that must stay positive.
    pub positive: &'a dyn Fn(usize) -> bool,
}

/// Descends from `x` until every segment cost is at most `target` or
/// progress stops. Returns the worst remaining cost.
pub(crate) fn descend(problem: &Problem<'_>, x: &mut [f64], target: f64) -> f64 {
    let mut costs: Vec<f64> = (0..problem.n_segments)
        .map(|s| (problem.cost)(x, s))
        .collect();
    let worst = |c: &[f64]| c.iter().cloned().fold(0.0f64, f64::max);
    let mut steps: Vec<f64> = x.iter().map(|v| 0.25 * v.abs() + 0.25).collect();
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && worst(&costs) > target {
        iterations += 1;
        let mut improved = false;
        for j in 0..x.len() {
            let segs = (problem.affects)(j);
            let before = segs.iter().map(|&s| costs[s]).fold(0.0f64, f64::max);
            for sign in [1.0, -1.0] {
                let old = x[j];
                x[j] = old + sign * steps[j];
                if (problem.positive)(j) && x[j] <= 0.0 {
                    x[j] = old;
                    continue;
                }
                let trial: Vec<f64> = segs.iter().map(|&s| (problem.cost)(x, s)).collect();
                let after = trial.iter().cloned().fold(0.0f64, f64::max);
                if after < before {
                    for (&s, c) in segs.iter().zip(trial) {
                        costs[s] = c;
                    }
                    improved = true;
                    break;
                }
                x[j] = old;
            }
        }
        if !improved {
            let mut live = false;
            for (s, v) in steps.iter_mut().zip(x.iter()) {
                *s *= 0.5;
                live |= *s > 1e-12 * (1.0 + v.abs());
            }
            if !live {
                break;
            }
        }
    }
    worst(&costs)
}
