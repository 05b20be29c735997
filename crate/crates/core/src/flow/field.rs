//! Right-hand sides of the forced equation and its variational system.

use crate::params::Params;

/// Phase point (x, y = x').
pub type State = [f64; 2];

/// Which form of the forced equation to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    /// Forcing p3 sin(p4 t) added to the velocity equation.
    #[default]
    Original,
    /// The forced response removed: forcing (3p3/(1+p4²)) x² sin(p4 t).
    /// The origin is then an exact saddle for every t.
    Transformed,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Original => "original",
            Variant::Transformed => "transformed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcedField {
    pub params: Params,
    pub variant: Variant,
}

impl ForcedField {
    pub fn new(params: Params, variant: Variant) -> Self {
        Self { params, variant }
    }

    /// Forcing term g(t, x) and ∂g/∂x.
    #[inline]
    fn forcing(&self, t: f64, x: f64) -> (f64, f64) {
        let p = &self.params;
        let s = (p.p4 * t).sin();
        match self.variant {
            Variant::Original => (p.p3 * s, 0.0),
            Variant::Transformed => {
                let c = 3.0 * p.p3 / (1.0 + p.p4 * p.p4) * s;
                (c * x * x, 2.0 * c * x)
            }
        }
    }

    #[inline]
    pub fn rhs(&self, t: f64, s: &State) -> State {
        let [x, y] = *s;
        let (g, _) = self.forcing(t, x);
        [y, x - x * x * x + self.params.eps * (self.params.damping(x) * y + g)]
    }

    /// State plus the 2×2 fundamental matrix, stored column-major in s[2..6].
    pub fn variational(&self, t: f64, s: &[f64; 6]) -> [f64; 6] {
        let p = &self.params;
        let [x, y] = [s[0], s[1]];
        let (g, dg) = self.forcing(t, x);
        let j10 = 1.0 - 3.0 * x * x + p.eps * ((p.p2 - 2.0 * x) * y + dg);
        let j11 = p.eps * p.damping(x);
        [
            y,
            x - x * x * x + p.eps * (p.damping(x) * y + g),
            s[3],
            j10 * s[2] + j11 * s[3],
            s[5],
            j10 * s[4] + j11 * s[5],
        ]
    }

    /// Divergence of the vector field at x.
    pub fn divergence(&self, x: f64) -> f64 {
        self.params.eps * self.params.damping(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variational_matches_differences() {
        let f = ForcedField::new(Params::new(0.3, 0.5, 1.1, 0.7, 2.0), Variant::Transformed);
        let (t, x, y) = (0.4, 0.8, -0.3);
        let v = f.variational(t, &[x, y, 1.0, 0.0, 0.0, 1.0]);
        let h = 1e-6;
        let dx = (f.rhs(t, &[x + h, y])[1] - f.rhs(t, &[x - h, y])[1]) / (2.0 * h);
        let dy = (f.rhs(t, &[x, y + h])[1] - f.rhs(t, &[x, y - h])[1]) / (2.0 * h);
        assert!((v[3] - dx).abs() < 1e-8 && (v[5] - dy).abs() < 1e-8);
        assert_eq!(f.rhs(1.3, &[0.0, 0.0]), [0.0, 0.0]);
    }
}
