//! Adaptive DOP853 on fixed-size states, with step control as in the
//! usual Hairer/scipy implementation and event location by re-stepping.

use super::dop853_tables::{A, B, C, E3, E5};
use crate::error::{Error, Result};

const STAGES: usize = 12;
const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const ERROR_EXPONENT: f64 = -1.0 / 8.0;
const ORDER: i32 = 8;
const MAX_STEPS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Tolerance {
    /// Manifold and splitting work.
    pub const FINE: Tolerance = Tolerance { rtol: 1e-11, atol: 1e-11 };
    /// Parameter sweeps.
    pub const SWEEP: Tolerance = Tolerance { rtol: 1e-9, atol: 1e-9 };

    pub fn new(rtol: f64, atol: f64) -> Self {
        Self { rtol, atol }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::FINE
    }
}

type Stages<const N: usize> = [[f64; N]; STAGES + 1];

fn rk_step<F, const N: usize>(f: &F, t: f64, y: &[f64; N], fy: &[f64; N], h: f64, k: &mut Stages<N>) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    k[0] = *fy;
    for s in 1..STAGES {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..N {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        k[s] = f(t + C[s] * h, &ys);
    }
    let mut y_new = *y;
    for (s, ks) in k.iter().enumerate().take(STAGES) {
        if B[s] != 0.0 {
            for i in 0..N {
                y_new[i] += h * B[s] * ks[i];
            }
        }
    }
    y_new
}

fn error_norm<const N: usize>(k: &Stages<N>, h: f64, scale: &[f64; N]) -> f64 {
    let mut e5 = 0.0;
    let mut e3 = 0.0;
    for i in 0..N {
        let mut a = 0.0;
        let mut b = 0.0;
        for s in 0..=STAGES {
            a += k[s][i] * E5[s];
            b += k[s][i] * E3[s];
        }
        e5 += (a / scale[i]).powi(2);
        e3 += (b / scale[i]).powi(2);
    }
    if e5 == 0.0 && e3 == 0.0 {
        return 0.0;
    }
    h.abs() * e5 / ((e5 + 0.01 * e3) * N as f64).sqrt()
}

fn rms<const N: usize>(v: &[f64; N], scale: &[f64; N]) -> f64 {
    (v.iter().zip(scale).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / N as f64).sqrt()
}

fn finite<const N: usize>(y: &[f64; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// Stepping state of one integration.
pub struct Integrator<'a, F, const N: usize> {
    f: &'a F,
    tol: Tolerance,
    pub t: f64,
    pub y: [f64; N],
    fy: [f64; N],
    h_abs: f64,
    dir: f64,
    steps: usize,
    // last accepted step, kept for event location
    prev_t: f64,
    prev_y: [f64; N],
    prev_fy: [f64; N],
}

impl<'a, F, const N: usize> Integrator<'a, F, N>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    pub fn new(f: &'a F, t0: f64, y0: [f64; N], direction: f64, tol: Tolerance) -> Result<Self> {
        if !finite(&y0) || !t0.is_finite() {
            return Err(Error::NonFinite { t: t0 });
        }
        let fy = f(t0, &y0);
        let dir = direction.signum();
        let mut it = Self {
            f,
            tol,
            t: t0,
            y: y0,
            fy,
            h_abs: 0.0,
            dir,
            steps: 0,
            prev_t: t0,
            prev_y: y0,
            prev_fy: fy,
        };
        it.h_abs = it.initial_step();
        Ok(it)
    }

    fn initial_step(&self) -> f64 {
        let scale: [f64; N] = std::array::from_fn(|i| self.tol.atol + self.y[i].abs() * self.tol.rtol);
        let d0 = rms(&self.y, &scale);
        let d1 = rms(&self.fy, &scale);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1: [f64; N] = std::array::from_fn(|i| self.y[i] + h0 * self.dir * self.fy[i]);
        let f1 = (self.f)(self.t + h0 * self.dir, &y1);
        let diff: [f64; N] = std::array::from_fn(|i| f1[i] - self.fy[i]);
        let d2 = rms(&diff, &scale) / h0;
        let h1 = if d1 <= 1e-15 && d2 <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(1.0 / (ORDER + 1) as f64)
        };
        (100.0 * h0).min(h1)
    }

    /// One accepted step, not past `t_bound`.
    pub fn step(&mut self, t_bound: f64) -> Result<()> {
        self.steps += 1;
        if self.steps > MAX_STEPS {
            return Err(Error::StepFailure { t: self.t, h: self.h_abs });
        }
        let min_step = 10.0 * (next_toward(self.t, self.dir) - self.t).abs();
        let mut h_abs = self.h_abs.max(min_step);
        let mut rejected = false;
        let mut k: Stages<N> = [[0.0; N]; STAGES + 1];
        loop {
            if h_abs < min_step {
                return Err(Error::StepFailure { t: self.t, h: h_abs });
            }
            let mut t_new = self.t + self.dir * h_abs;
            if self.dir * (t_new - t_bound) > 0.0 {
                t_new = t_bound;
            }
            let h = t_new - self.t;
            h_abs = h.abs();
            let y_new = rk_step(self.f, self.t, &self.y, &self.fy, h, &mut k);
            if !finite(&y_new) {
                h_abs *= MIN_FACTOR;
                rejected = true;
                continue;
            }
            let f_new = (self.f)(t_new, &y_new);
            k[STAGES] = f_new;
            let scale: [f64; N] =
                std::array::from_fn(|i| self.tol.atol + self.y[i].abs().max(y_new[i].abs()) * self.tol.rtol);
            let err = error_norm(&k, h, &scale);
            if err < 1.0 {
                let mut factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    MAX_FACTOR.min(SAFETY * err.powf(ERROR_EXPONENT))
                };
                if rejected {
                    factor = factor.min(1.0);
                }
                self.prev_t = self.t;
                self.prev_y = self.y;
                self.prev_fy = self.fy;
                self.t = t_new;
                self.y = y_new;
                self.fy = f_new;
                self.h_abs = h_abs * factor;
                return Ok(());
            }
            h_abs *= MIN_FACTOR.max(SAFETY * err.powf(ERROR_EXPONENT));
            rejected = true;
        }
    }

    /// State at prev_t + θ·(t - prev_t) by re-stepping from the start of
    /// the last accepted step.
    fn within_last_step(&self, theta: f64) -> (f64, [f64; N]) {
        let h = self.t - self.prev_t;
        let mut k: Stages<N> = [[0.0; N]; STAGES + 1];
        let y = rk_step(self.f, self.prev_t, &self.prev_y, &self.prev_fy, theta * h, &mut k);
        (self.prev_t + theta * h, y)
    }
}

fn next_toward(t: f64, dir: f64) -> f64 {
    let next = if dir > 0.0 { next_up(t) } else { next_down(t) };
    if next == t {
        t + dir * f64::MIN_POSITIVE
    } else {
        next
    }
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let b = x.to_bits();
    f64::from_bits(if x > 0.0 { b + 1 } else { b - 1 })
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

/// y(t1) from y(t0) (either direction).
pub fn integrate<F, const N: usize>(f: &F, t0: f64, y0: [f64; N], t1: f64, tol: Tolerance) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if t1 == t0 {
        return Ok(y0);
    }
    let mut it = Integrator::new(f, t0, y0, t1 - t0, tol)?;
    while it.t != t1 {
        it.step(t1)?;
    }
    Ok(it.y)
}

/// Accepted step points from t0 to t1, both ends included.
pub fn trajectory<F, const N: usize>(
    f: &F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    tol: Tolerance,
) -> Result<Vec<(f64, [f64; N])>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut out = vec![(t0, y0)];
    if t1 == t0 {
        return Ok(out);
    }
    let mut it = Integrator::new(f, t0, y0, t1 - t0, tol)?;
    while it.t != t1 {
        it.step(t1)?;
        out.push((it.t, it.y));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing<const N: usize> {
    /// First accepted zero of the event function.
    Hit { t: f64, y: [f64; N] },
    /// Reached the time limit without an accepted zero.
    NotFound { t: f64, y: [f64; N] },
    /// The abort predicate fired (e.g. escape from a bounding box).
    Aborted { t: f64, y: [f64; N] },
}

/// Integrate from t0 towards t_end until g(t, y) changes sign at a point
/// accepted by `accept`. Zeros are located by the Illinois method on the
/// fraction of the step, re-stepping from the step start.
#[allow(clippy::too_many_arguments)]
pub fn find_crossing<F, G, P, Q, const N: usize>(
    f: &F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    tol: Tolerance,
    g: G,
    mut accept: P,
    mut abort: Q,
) -> Result<Crossing<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    G: Fn(f64, &[f64; N]) -> f64,
    P: FnMut(&[f64; N]) -> bool,
    Q: FnMut(f64, &[f64; N]) -> bool,
{
    let mut it = Integrator::new(f, t0, y0, t_end - t0, tol)?;
    let mut g0 = g(t0, &y0);
    while it.t != t_end {
        it.step(t_end)?;
        if abort(it.t, &it.y) {
            return Ok(Crossing::Aborted { t: it.t, y: it.y });
        }
        let g1 = g(it.t, &it.y);
        if g0 != 0.0 && (g1 == 0.0 || g0.signum() != g1.signum()) {
            let (tc, yc) = locate(&it, &g, g0, g1);
            if accept(&yc) {
                return Ok(Crossing::Hit { t: tc, y: yc });
            }
        }
        g0 = g1;
    }
    Ok(Crossing::NotFound { t: it.t, y: it.y })
}

fn locate<F, G, const N: usize>(it: &Integrator<'_, F, N>, g: &G, g0: f64, g1: f64) -> (f64, [f64; N])
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    G: Fn(f64, &[f64; N]) -> f64,
{
    if g1 == 0.0 {
        return (it.t, it.y);
    }
    let h = (it.t - it.prev_t).abs();
    let (mut a, mut fa) = (0.0f64, g0);
    let (mut b, mut fb) = (1.0f64, g1);
    let mut side = 0i8;
    let mut best = (it.t, it.y);
    for _ in 0..100 {
        if (b - a) * h <= 1e-15 * it.t.abs().max(1.0) {
            break;
        }
        let c = (a * fb - b * fa) / (fb - fa);
        let c = if c > a && c < b { c } else { 0.5 * (a + b) };
        let (tc, yc) = it.within_last_step(c);
        let fc = g(tc, &yc);
        best = (tc, yc);
        if fc == 0.0 {
            break;
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
    }
    best
}
