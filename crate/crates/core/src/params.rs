/// The parameter tuple (ε, p1, p2, p3, p4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub eps: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

impl Params {
    pub fn new(eps: f64, p1: f64, p2: f64, p3: f64, p4: f64) -> Self {
        Self { eps, p1, p2, p3, p4 }
    }

    /// Unforced system; p4 is irrelevant and set to 1.
    pub fn autonomous(eps: f64, p1: f64, p2: f64) -> Self {
        Self::new(eps, p1, p2, 0.0, 1.0)
    }

    /// Image under (p2, x, y) -> (-p2, -x, -y). The forcing flips sign too,
    /// which is equivalent to a half-period time shift.
    pub fn mirrored(&self) -> Self {
        Self { p2: -self.p2, p3: -self.p3, ..*self }
    }

    /// Forcing period 2π/p4.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.p4
    }

    /// Dissipation polynomial f(x) = p1 + p2 x - x².
    #[inline]
    pub fn damping(&self, x: f64) -> f64 {
        self.p1 + self.p2 * x - x * x
    }
}
