//! Quintic Hermite segments: value, slope and second derivative fixed at
//! both ends.

/// One quintic on `[x0, x1]` with end jets `[y, y', y'']`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quintic {
    pub x0: f64,
    pub x1: f64,
    pub left: [f64; 3],
    pub right: [f64; 3],
}

fn basis(t: f64) -> ([f64; 6], [f64; 6], [f64; 6]) {
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    (
        [
            1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5,
            t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5,
            0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5,
            10.0 * t3 - 15.0 * t4 + 6.0 * t5,
            -4.0 * t3 + 7.0 * t4 - 3.0 * t5,
            0.5 * t3 - t4 + 0.5 * t5,
        ],
        [
            -30.0 * t2 + 60.0 * t3 - 30.0 * t4,
            1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4,
            t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4,
            30.0 * t2 - 60.0 * t3 + 30.0 * t4,
            -12.0 * t2 + 28.0 * t3 - 15.0 * t4,
            1.5 * t2 - 4.0 * t3 + 2.5 * t4,
        ],
        [
            -60.0 * t + 180.0 * t2 - 120.0 * t3,
            -36.0 * t + 96.0 * t2 - 60.0 * t3,
            1.0 - 9.0 * t + 18.0 * t2 - 10.0 * t3,
            60.0 * t - 180.0 * t2 + 120.0 * t3,
            -24.0 * t + 84.0 * t2 - 60.0 * t3,
            3.0 * t - 12.0 * t2 + 10.0 * t3,
        ],
    )
}

impl Quintic {
    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    /// `[y, y', y'']` at `x`. The end jets are returned verbatim at the
    /// endpoints.
    pub fn eval(&self, x: f64) -> [f64; 3] {
        if x == self.x0 {
            return self.left;
        }
        if x == self.x1 {
            return self.right;
        }
        let h = self.width();
        let t = (x - self.x0) / h;
        let c = [
            self.left[0],
            self.left[1] * h,
            self.left[2] * h * h,
            self.right[0],
            self.right[1] * h,
            self.right[2] * h * h,
        ];
        let (b0, b1, b2) = basis(t);
        let dot = |b: &[f64; 6]| c.iter().zip(b).map(|(c, b)| c * b).sum::<f64>();
        [dot(&b0), dot(&b1) / h, dot(&b2) / (h * h)]
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x0 && x <= self.x1
    }
}
