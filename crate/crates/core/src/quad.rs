//! Adaptive Simpson quadrature.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadSettings {
    pub abs_tol: f64,
    /// Relative to a coarse estimate of the whole integral.
    pub rel_tol: f64,
    pub max_depth: u32,
    pub initial_panels: usize,
    /// How many times the panel count is doubled before giving up.
    pub max_doublings: u32,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings {
            abs_tol: 1e-9,
            rel_tol: 1e-13,
            max_depth: 48,
            initial_panels: 8,
            max_doublings: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },
    #[error(
        "quadrature on [{a}, {b}] did not converge: estimate {estimate}, \
         error estimate {error_estimate}, worst panel [{panel_a}, {panel_b}]"
    )]
    NoConvergence {
        a: f64,
        b: f64,
        estimate: f64,
        error_estimate: f64,
        panel_a: f64,
        panel_b: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Worker<'f, F> {
    f: &'f F,
    evaluations: usize,
    max_depth: u32,
    failure: Option<(f64, f64)>,
}

impl<F: Fn(f64) -> f64> Worker<'_, F> {
    fn eval(&mut self, x: f64) -> Result<f64, QuadError> {
        self.evaluations += 1;
        let v = (self.f)(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { x })
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        &mut self,
        a: f64,
        fa: f64,
        m: f64,
        fm: f64,
        b: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
        err_acc: &mut f64,
    ) -> Result<f64, QuadError> {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.eval(lm)?;
        let frm = self.eval(rm)?;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol || lm <= a || rm >= b {
            *err_acc += delta.abs() / 15.0;
            return Ok(left + right + delta / 15.0);
        }
        if depth >= self.max_depth {
            if self.failure.is_none() {
                self.failure = Some((a, b));
            }
            *err_acc += delta.abs() / 15.0;
            return Ok(left + right + delta / 15.0);
        }
        let l = self.recurse(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1, err_acc)?;
        let r = self.recurse(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1, err_acc)?;
        Ok(l + r)
    }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    settings: QuadSettings,
) -> Result<QuadResult, QuadError> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let mut panels = settings.initial_panels.max(1);
    let mut last = None;
    for _ in 0..=settings.max_doublings {
        let mut worker = Worker {
            f: &f,
            evaluations: 0,
            max_depth: settings.max_depth,
            failure: None,
        };
        let h = (b - a) / panels as f64;
        // coarse pass fixes the relative tolerance
        let mut coarse = Vec::with_capacity(panels);
        for i in 0..panels {
            let pa = a + h * i as f64;
            let pb = if i + 1 == panels { b } else { a + h * (i + 1) as f64 };
            let pm = 0.5 * (pa + pb);
            let (fa, fm, fb) = (worker.eval(pa)?, worker.eval(pm)?, worker.eval(pb)?);
            coarse.push((pa, fa, pm, fm, pb, fb, (pb - pa) / 6.0 * (fa + 4.0 * fm + fb)));
        }
        let total: f64 = coarse.iter().map(|c| c.6).sum();
        let tol = settings.abs_tol.max(settings.rel_tol * total.abs());
        let panel_tol = tol / panels as f64;
        let mut value = 0.0;
        let mut err = 0.0;
        for (pa, fa, pm, fm, pb, fb, whole) in coarse {
            value += worker.recurse(pa, fa, pm, fm, pb, fb, whole, panel_tol, 0, &mut err)?;
        }
        match worker.failure {
            None => {
                return Ok(QuadResult {
                    value,
                    error_estimate: err,
                    evaluations: worker.evaluations,
                })
            }
            Some((pa, pb)) => {
                last = Some(QuadError::NoConvergence {
                    a,
                    b,
                    estimate: value,
                    error_estimate: err,
                    panel_a: pa,
                    panel_b: pb,
                });
                panels *= 2;
            }
        }
    }
    Err(last.expect("at least one pass ran"))
}
