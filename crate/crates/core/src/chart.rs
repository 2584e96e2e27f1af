//! Finite-difference laboratory for the dualistic structure of `R ×_f R^{2n}`
//! in product coordinates `(z, x¹, …, x^{2n})`.
//!
//! The line factor carries the trivial structure `dz²`, the fiber a
//! constant-coefficient dual pair on the flat metric. Everything here is `f64`.

use serde::{Deserialize, Serialize};

use crate::ambient::{ambient_curvature, AmbientGeometry, ProfileKind, WarpingProfile};
use crate::linalg::SymMat;
use crate::{tolerance, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub z: f64,
    /// Fiber coordinates, length `2n`.
    pub x: Vec<f64>,
}

impl ChartPoint {
    pub fn new(z: f64, x: Vec<f64>) -> Self {
        ChartPoint { z, x }
    }

    /// Point over `z` at the fiber origin.
    pub fn on_axis(z: f64, n: usize) -> Self {
        ChartPoint { z, x: vec![0.0; 2 * n] }
    }

    pub fn dim(&self) -> usize {
        self.x.len() + 1
    }

    fn shifted(&self, coord: usize, by: f64) -> Self {
        let mut p = self.clone();
        if coord == 0 {
            p.z += by;
        } else {
            p.x[coord - 1] += by;
        }
        p
    }
}

/// Constant Christoffel symbols `∇_{∂a}∂b = C^c_{ab} ∂c` of a fiber connection,
/// stored at `[(c·d + a)·d + b]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberConnection {
    pub d: usize,
    pub coeffs: Vec<f64>,
}

impl FiberConnection {
    /// Levi-Civita connection of the flat fiber metric.
    pub fn flat(n: usize) -> Self {
        FiberConnection { d: 2 * n, coeffs: vec![0.0; 8 * n * n * n] }
    }

    pub fn get(&self, c: usize, a: usize, b: usize) -> f64 {
        self.coeffs[(c * self.d + a) * self.d + b]
    }

    /// The dual pair `(C, −C)` from a totally symmetric cubic form `C_{abc}`
    /// on the flat fiber.
    pub fn from_cubic(d: usize, cubic: &[f64]) -> Result<(Self, Self)> {
        if cubic.len() != d * d * d {
            return Err(Error::DimensionMismatch { expected: d * d * d, got: cubic.len() });
        }
        let at = |a: usize, b: usize, c: usize| cubic[(a * d + b) * d + c];
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let v = at(a, b, c);
                    let tol = tolerance::STRUCTURE * v.abs().max(1.0);
                    if (at(b, a, c) - v).abs() > tol || (at(a, c, b) - v).abs() > tol {
                        return Err(Error::InvalidStructure("cubic form is not totally symmetric".into()));
                    }
                }
            }
        }
        let primal = FiberConnection { d, coeffs: cubic.to_vec() };
        let dual = FiberConnection { d, coeffs: cubic.iter().map(|v| -v).collect() };
        Ok((primal, dual))
    }

    /// `max |C^c_{ab} + C*^b_{ac}|`: duality defect with respect to the flat metric.
    pub fn duality_defect(&self, dual: &FiberConnection) -> f64 {
        let d = self.d;
        let mut worst = 0.0f64;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    worst = worst.max((self.get(c, a, b) + dual.get(b, a, c)).abs());
                }
            }
        }
        worst
    }
}

/// Christoffel symbols `∇_{∂i}∂j = Γ^l_{ij} ∂l` at `[(l·D + i)·D + j]`, `D = 2n + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionCoefficients {
    pub dim: usize,
    pub gamma: Vec<f64>,
    pub gamma_star: Vec<f64>,
}

impl ConnectionCoefficients {
    fn idx(&self, l: usize, i: usize, j: usize) -> usize {
        (l * self.dim + i) * self.dim + j
    }

    pub fn get(&self, l: usize, i: usize, j: usize) -> f64 {
        self.gamma[self.idx(l, i, j)]
    }

    pub fn get_star(&self, l: usize, i: usize, j: usize) -> f64 {
        self.gamma_star[self.idx(l, i, j)]
    }

    /// `max |Γ^l_{ij} − Γ^l_{ji}|` over both connections.
    pub fn torsion(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for l in 0..d {
            for i in 0..d {
                for j in 0..d {
                    worst = worst
                        .max((self.get(l, i, j) - self.get(l, j, i)).abs())
                        .max((self.get_star(l, i, j) - self.get_star(l, j, i)).abs());
                }
            }
        }
        worst
    }
}

/// `(f, f', f'')` at `z`. A custom profile is only known at its own base point.
fn jet_at(profile: &WarpingProfile<f64>, z: f64) -> Result<(f64, f64, f64)> {
    let jet = match profile.kind {
        ProfileKind::Custom if z == profile.z => (profile.f, profile.fp, profile.fpp),
        kind => kind.eval(z).ok_or_else(|| Error::ProfileNotEvaluable(kind.name().into()))?,
    };
    if !(jet.0 > 0.0) || !jet.0.is_finite() {
        return Err(Error::NonPositiveWarping(jet.0));
    }
    Ok(jet)
}

fn check_step(step: f64) -> Result<()> {
    if (tolerance::STEP_MIN..=tolerance::STEP_MAX).contains(&step) {
        Ok(())
    } else {
        Err(Error::StepOutOfRange(step))
    }
}

/// `diag(1, f², …, f²)` at `p`.
pub fn warped_metric(p: &ChartPoint, profile: &WarpingProfile<f64>) -> Result<SymMat<f64>> {
    let (f, _, _) = jet_at(profile, p.z)?;
    let d = p.dim();
    Ok(SymMat::diagonal(&(0..d).map(|i| if i == 0 { 1.0 } else { f * f }).collect::<Vec<_>>()))
}

/// Coefficients of the warped pair `(∇̄, ∇̄*)` built from the fiber pair `base`.
pub fn dual_connections(
    p: &ChartPoint,
    profile: &WarpingProfile<f64>,
    base: &(FiberConnection, FiberConnection),
) -> Result<ConnectionCoefficients> {
    let (f, fp, _) = jet_at(profile, p.z)?;
    let dim = p.dim();
    for c in [&base.0, &base.1] {
        if c.d + 1 != dim {
            return Err(Error::DimensionMismatch { expected: dim - 1, got: c.d });
        }
    }
    let mut out = ConnectionCoefficients { dim, gamma: vec![0.0; dim * dim * dim], gamma_star: vec![0.0; dim * dim * dim] };
    let ratio = fp / f;
    for a in 1..dim {
        // mixed: ∇̄_{∂z}∂a = ∇̄_{∂a}∂z = (f'/f) ∂a
        for (i, j) in [(0, a), (a, 0)] {
            let k = out.idx(a, i, j);
            out.gamma[k] = ratio;
            out.gamma_star[k] = ratio;
        }
        for b in 1..dim {
            // fiber: base connection minus (ḡ(∂a,∂b)/f) grad f, grad f = f' ∂z
            if a == b {
                let k = out.idx(0, a, b);
                out.gamma[k] = -f * fp;
                out.gamma_star[k] = -f * fp;
            }
            for c in 1..dim {
                let k = out.idx(c, a, b);
                out.gamma[k] = base.0.get(c - 1, a - 1, b - 1);
                out.gamma_star[k] = base.1.get(c - 1, a - 1, b - 1);
            }
        }
    }
    Ok(out)
}

/// Largest `|∂_i ḡ(∂j, ∂k) − ḡ(∇̄_i ∂j, ∂k) − ḡ(∂j, ∇̄*_i ∂k)|`, the derivative
/// taken by central differences.
pub fn duality_residual(
    profile: &WarpingProfile<f64>,
    base: &(FiberConnection, FiberConnection),
    p: &ChartPoint,
    step: f64,
) -> Result<f64> {
    check_step(step)?;
    let g = warped_metric(p, profile)?;
    let conn = dual_connections(p, profile, base)?;
    let d = p.dim();
    let mut worst = 0.0f64;
    for i in 0..d {
        let plus = warped_metric(&p.shifted(i, step), profile)?;
        let minus = warped_metric(&p.shifted(i, -step), profile)?;
        for j in 0..d {
            for k in 0..d {
                let fd = (plus.get(j, k) - minus.get(j, k)) / (2.0 * step);
                let mut rhs = 0.0;
                for l in 0..d {
                    rhs += conn.get(l, i, j) * g.get(l, k) + conn.get_star(l, i, k) * g.get(j, l);
                }
                worst = worst.max((fd - rhs).abs());
            }
        }
    }
    Ok(worst)
}

/// `R_{ijkl} = ḡ(R(∂i, ∂j)∂k, ∂l)` for one connection, with
/// `R(X, Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_{[X,Y]}`, coefficient derivatives by central differences.
fn coordinate_curvature(
    p: &ChartPoint,
    profile: &WarpingProfile<f64>,
    base: &(FiberConnection, FiberConnection),
    step: f64,
    star: bool,
) -> Result<Vec<f64>> {
    let pick = |c: &ConnectionCoefficients, l, i, j| if star { c.get_star(l, i, j) } else { c.get(l, i, j) };
    let d = p.dim();
    let at = dual_connections(p, profile, base)?;
    let g = warped_metric(p, profile)?;
    let mut deriv = vec![0.0; d * d * d * d]; // ∂_m Γ^l_{ij} at [((m·d + l)·d + i)·d + j]
    for m in 0..d {
        let plus = dual_connections(&p.shifted(m, step), profile, base)?;
        let minus = dual_connections(&p.shifted(m, -step), profile, base)?;
        for l in 0..d {
            for i in 0..d {
                for j in 0..d {
                    deriv[((m * d + l) * d + i) * d + j] = (pick(&plus, l, i, j) - pick(&minus, l, i, j)) / (2.0 * step);
                }
            }
        }
    }
    let dg = |m: usize, l: usize, i: usize, j: usize| deriv[((m * d + l) * d + i) * d + j];
    let mut out = vec![0.0; d * d * d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    // R^s_{ijk}, lowered with the diagonal metric
                    let mut r = dg(i, l, j, k) - dg(j, l, i, k);
                    for s in 0..d {
                        r += pick(&at, l, i, s) * pick(&at, s, j, k) - pick(&at, l, j, s) * pick(&at, s, i, k);
                    }
                    out[((i * d + j) * d + k) * d + l] = r * g.get(l, l);
                }
            }
        }
    }
    Ok(out)
}

/// Curvature tensors of `∇̄` and `∇̄*` in the orthonormal frame `∂z, ∂a/f`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartCurvature {
    pub dim: usize,
    pub r: Vec<f64>,
    pub r_star: Vec<f64>,
}

impl ChartCurvature {
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.r[((i * self.dim + j) * self.dim + k) * self.dim + l]
    }

    pub fn get_star(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.r_star[((i * self.dim + j) * self.dim + k) * self.dim + l]
    }

    /// `½(R + R*)`
    pub fn statistical(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        0.5 * (self.get(i, j, k, l) + self.get_star(i, j, k, l))
    }
}

pub fn chart_curvature(
    p: &ChartPoint,
    profile: &WarpingProfile<f64>,
    base: &(FiberConnection, FiberConnection),
    step: f64,
) -> Result<ChartCurvature> {
    check_step(step)?;
    let (f, _, _) = jet_at(profile, p.z)?;
    let d = p.dim();
    let scale: Vec<f64> = (0..d).map(|i| if i == 0 { 1.0 } else { 1.0 / f }).collect();
    let orthonormal = |coord: Vec<f64>| -> Vec<f64> {
        let mut out = coord;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        out[((i * d + j) * d + k) * d + l] *= scale[i] * scale[j] * scale[k] * scale[l];
                    }
                }
            }
        }
        out
    };
    Ok(ChartCurvature {
        dim: d,
        r: orthonormal(coordinate_curvature(p, profile, base, step, false)?),
        r_star: orthonormal(coordinate_curvature(p, profile, base, step, true)?),
    })
}

/// Largest deviation of the finite-difference curvature of the flat self-dual
/// structure from the closed form with `c̄ = 0`, over orthonormal basis quadruples
/// and both connections.
pub fn chart_curvature_check(profile: &WarpingProfile<f64>, p: &ChartPoint, step: f64) -> Result<f64> {
    if p.x.len() % 2 != 0 {
        return Err(Error::DimensionMismatch { expected: p.x.len() + 1, got: p.x.len() });
    }
    let n = p.x.len() / 2;
    let base = (FiberConnection::flat(n), FiberConnection::flat(n));
    let curv = chart_curvature(p, profile, &base, step)?;
    let (f, fp, fpp) = jet_at(profile, p.z)?;
    let at_point = WarpingProfile { kind: ProfileKind::Custom, z: p.z, f, fp, fpp };
    let geo = AmbientGeometry::new(n, 0.0, at_point);
    let d = p.dim();
    let e = |i: usize| crate::linalg::unit::<f64>(d, i);
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let exact = ambient_curvature(&e(i), &e(j), &e(k), &e(l), &geo)?;
                    worst = worst
                        .max((curv.get(i, j, k, l) - exact).abs())
                        .max((curv.get_star(i, j, k, l) - exact).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// `residual(step) / residual(step/2)` for the flat self-dual structure.
pub fn residual_halving_ratio(profile: &WarpingProfile<f64>, p: &ChartPoint, step: f64) -> Result<f64> {
    let n = p.x.len() / 2;
    let base = (FiberConnection::flat(n), FiberConnection::flat(n));
    let coarse = duality_residual(profile, &base, p, step)?;
    let fine = duality_residual(profile, &base, p, step / 2.0)?;
    Ok(coarse / fine)
}
