//! The Siegel upper half space `𝒟ₙ`, the `Sp(2n, ℝ)` Möbius action and the
//! equivariant map `φ : 𝒟ₙ → J(ℝ²ⁿ, ω, 0)`.
//!
//! `φ(x + iy) = [[x y⁻¹, -x y⁻¹ x - y], [y⁻¹, -y⁻¹ x]]` sends `iI` to `J₀`
//! and satisfies `φ(g·z) = g φ(z) g⁻¹`. It is anti-holomorphic when the
//! tangent space at `φ(z)` carries left multiplication by `φ(z)`:
//! `dφ(iH) = -φ(z) dφ(H)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, blocks, from_blocks, max_abs, sym_eigen, CMat, RMat, I};
use crate::sampling;
use crate::serial::{self, Rows};
use crate::symplectic::{self, CompatibleStructure, SymplecticForm};
use crate::tol;
use crate::{Error, Result};

/// A point `z = x + iy` of `𝒟ₙ`: `x`, `y` real symmetric, `y` positive
/// definite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SiegelPointJson", into = "SiegelPointJson")]
pub struct SiegelPoint {
    n: usize,
    x: RMat,
    y: RMat,
}

#[derive(Serialize, Deserialize)]
struct SiegelPointJson {
    x: Rows,
    y: Rows,
}

impl TryFrom<SiegelPointJson> for SiegelPoint {
    type Error = Error;
    fn try_from(j: SiegelPointJson) -> Result<Self> {
        SiegelPoint::new(serial::from_rows(&j.x)?, serial::from_rows(&j.y)?)
    }
}

impl From<SiegelPoint> for SiegelPointJson {
    fn from(p: SiegelPoint) -> Self {
        SiegelPointJson { x: serial::to_rows(&p.x), y: serial::to_rows(&p.y) }
    }
}

impl SiegelPoint {
    pub fn new(x: RMat, y: RMat) -> Result<Self> {
        let n = x.nrows();
        if n == 0 || x.ncols() != n || y.nrows() != n || y.ncols() != n {
            return Err(Error::InvalidDimension(format!(
                "x and y must be equal nonempty square matrices, got {}x{} and {}x{}",
                x.nrows(),
                x.ncols(),
                y.nrows(),
                y.ncols()
            )));
        }
        let z = compose(&x, &y);
        if let Some(reason) = domain_violation(&z) {
            return Err(Error::NotInDomain(reason));
        }
        Ok(Self { n, x: linalg::symmetrize(&x), y: linalg::symmetrize(&y) })
    }

    pub fn from_complex(z: &CMat) -> Result<Self> {
        Self::new(linalg::real_part(z), linalg::imag_part(z))
    }

    /// `iI`, the base point fixed by `U(n)`.
    pub fn base(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("n must be at least 1".into()));
        }
        Ok(Self { n, x: RMat::zeros(n, n), y: RMat::identity(n, n) })
    }

    /// `x` uniform symmetric and `y = I + a` with `‖a‖ ≤ ½`, so `y ≥ ½ I`.
    pub fn random(n: usize, rng: &mut impl rand::Rng) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("n must be at least 1".into()));
        }
        let x = sampling::symmetric(n, rng);
        let a = linalg::symmetrize(&sampling::real(n, n, rng)) * (0.5 / n as f64);
        Self::new(x, RMat::identity(n, n) + a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &RMat {
        &self.x
    }

    pub fn y(&self) -> &RMat {
        &self.y
    }

    pub fn to_complex(&self) -> CMat {
        compose(&self.x, &self.y)
    }

    /// `z + t·H` for a complex direction `H`, validated.
    pub fn shifted(&self, h: &CMat, t: Complex64) -> Result<Self> {
        Self::from_complex(&(self.to_complex() + h * t))
    }
}

fn compose(x: &RMat, y: &RMat) -> CMat {
    CMat::from_fn(x.nrows(), x.ncols(), |i, j| Complex64::new(x[(i, j)], y[(i, j)]))
}

fn domain_violation(z: &CMat) -> Option<String> {
    let n = z.nrows();
    if n == 0 || z.ncols() != n {
        return Some("not a nonempty square matrix".into());
    }
    let asym = linalg::cmax_abs(&(z - z.transpose()));
    if asym > tol::DOMAIN_SYMMETRY * linalg::cunit_scale(z) {
        return Some(format!("not symmetric (deviation {asym:e})"));
    }
    let y = linalg::symmetrize(&linalg::imag_part(z));
    let (vals, _) = sym_eigen(&y);
    let top = vals.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let smallest = vals[0];
    if !(smallest > tol::DOMAIN_PD_REL * top) {
        return Some(format!("Im z not positive definite (smallest eigenvalue {smallest:e})"));
    }
    None
}

/// Symmetric with positive-definite imaginary part.
pub fn is_in_domain(z: &CMat) -> bool {
    domain_violation(z).is_none()
}

fn check_symplectic(g: &RMat, n: usize) -> Result<SymplecticForm> {
    let form = SymplecticForm::standard(n)?;
    if !symplectic::sp_membership(g, &form)? {
        let dev = max_abs(&(g.transpose() * form.omega() * g - form.omega()));
        return Err(Error::NotSymplectic(dev));
    }
    Ok(form)
}

/// `g·z = (a z + b)(c z + d)⁻¹` with `a, b, c, d` the blocks of `g`.
pub fn mobius(g: &RMat, z: &SiegelPoint) -> Result<SiegelPoint> {
    check_symplectic(g, z.n())?;
    let (a, b, c, d) = blocks(&linalg::complexify(g));
    let zc = z.to_complex();
    let num = &a * &zc + &b;
    let den = &c * &zc + &d;
    let den_inv = linalg::cguarded_inverse(&den, tol::SINGULAR_REL).ok_or(Error::SingularDenominator)?;
    let w = num * den_inv;
    SiegelPoint::from_complex(&linalg::csymmetrize(&w))
}

/// The equivariant map `φ` into compatible structures of index 0.
pub fn phi(z: &SiegelPoint) -> Result<CompatibleStructure> {
    CompatibleStructure::standard(phi_matrix(z)?)
}

/// The matrix of `φ(z)` without the compatibility bookkeeping.
pub fn phi_matrix(z: &SiegelPoint) -> Result<RMat> {
    let x = z.x();
    let y = z.y();
    let y_inv = y.clone().cholesky().ok_or(Error::SingularBlock("y"))?.inverse();
    let x_yinv = x * &y_inv;
    Ok(from_blocks(&x_yinv, &(-(&x_yinv * x) - y), &y_inv, &(-(&y_inv * x))))
}

/// Inverse of `φ` on index-0 structures: `y = J₂₁⁻¹`, `x = J₁₁ y`.
pub fn phi_inverse(j: &CompatibleStructure) -> Result<SiegelPoint> {
    if !j.form().is_standard() {
        return Err(Error::NonStandardForm);
    }
    if j.index() != 0 {
        return Err(Error::NotCompatible(format!("taming index {} ≠ 0", j.index())));
    }
    let (j11, _, j21, _) = blocks(j.matrix());
    let y = linalg::guarded_inverse(&j21, tol::SINGULAR_REL).ok_or(Error::SingularBlock("J₂₁"))?;
    let x = j11 * &y;
    SiegelPoint::new(linalg::symmetrize(&x), linalg::symmetrize(&y))
}

/// `‖D_{iH}φ(z) + φ(z) D_Hφ(z)‖_max` with central differences of the given
/// step. Vanishes to `O(step²)` because `φ` is anti-holomorphic for left
/// multiplication by `φ(z)`.
pub fn antiholomorphy_residual(z: &SiegelPoint, h: &CMat, step: f64) -> Result<f64> {
    let (d_h, d_ih, phi_z) = directional_derivatives(z, h, step)?;
    Ok(max_abs(&(d_ih + &phi_z * d_h)))
}

/// `‖D_Hφ φ(z) + φ(z) D_Hφ‖_max`: tangency of the difference quotient to
/// the space of complex structures at `φ(z)`.
pub fn tangency_residual(z: &SiegelPoint, h: &CMat, step: f64) -> Result<f64> {
    let (d_h, _, phi_z) = directional_derivatives(z, h, step)?;
    Ok(max_abs(&(&d_h * &phi_z + &phi_z * &d_h)))
}

fn directional_derivatives(z: &SiegelPoint, h: &CMat, step: f64) -> Result<(RMat, RMat, RMat)> {
    if !(step > 0.0 && step <= 1e-3) {
        return Err(Error::InvalidStep(step));
    }
    if h.nrows() != z.n() || h.ncols() != z.n() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", z.n()),
            found: format!("{}x{}", h.nrows(), h.ncols()),
        });
    }
    let asym = linalg::cmax_abs(&(h - h.transpose()));
    if asym > tol::ALGEBRAIC * linalg::cunit_scale(h) {
        return Err(Error::NotSymmetric(asym));
    }
    let at = |t: Complex64| -> Result<RMat> {
        let p = z.shifted(h, t).map_err(|e| Error::StepLeavesDomain(e.to_string()))?;
        phi_matrix(&p)
    };
    let s = Complex64::new(step, 0.0);
    let d_h = (at(s)? - at(-s)?) / (2.0 * step);
    let d_ih = (at(s * I)? - at(-s * I)?) / (2.0 * step);
    Ok((d_h, d_ih, phi_matrix(z)?))
}

/// `[[p, q], [-q, p]]` for `a = p + iq`; unitary `a` gives the stabilizer
/// of `iI`.
pub fn embed_unitary(a: &CMat, check: bool) -> Result<RMat> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::InvalidDimension("a must be a nonempty square matrix".into()));
    }
    if check {
        let dev = linalg::cmax_abs(&(a.adjoint() * a - CMat::identity(n, n)));
        if dev > tol::ALGEBRAIC {
            return Err(Error::NotUnitary(dev));
        }
    }
    let p = linalg::real_part(a);
    let q = linalg::imag_part(a);
    Ok(from_blocks(&p, &q, &(-&q), &p))
}

/// Whether `g` has the block shape `d = a`, `c = -b` of an embedded unitary.
pub fn has_unitary_blocks(g: &RMat) -> bool {
    let (a, b, c, d) = blocks(g);
    let scale = linalg::unit_scale(g);
    max_abs(&(&d - &a)) <= tol::ALGEBRAIC * scale && max_abs(&(&c + &b)) <= tol::ALGEBRAIC * scale
}

/// Whether `g` fixes `iI` under the Möbius action.
pub fn fixes_base_point(g: &RMat) -> Result<bool> {
    let n = g.nrows() / 2;
    let image = mobius(g, &SiegelPoint::base(n)?)?;
    let dev = linalg::cmax_abs(&(image.to_complex() - SiegelPoint::base(n)?.to_complex()));
    Ok(dev <= tol::ALGEBRAIC * linalg::unit_scale(g).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{j0, random_sp};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_point(n: usize, seed: u64) -> SiegelPoint {
        SiegelPoint::random(n, &mut sampling::rng(seed)).unwrap()
    }

    #[test]
    fn domain_examples() {
        assert!(is_in_domain(&(CMat::identity(2, 2) * I)));
        let z = CMat::from_row_slice(2, 2, &[I, c(0.0, 0.0), c(0.0, 0.0), -I]);
        assert!(!is_in_domain(&z));
        let z = CMat::from_row_slice(2, 2, &[I, c(0.3, 0.0), c(0.0, 0.0), I]);
        assert!(!is_in_domain(&z));
        assert!(SiegelPoint::from_complex(&z).is_err());
    }

    #[test]
    fn mobius_examples() {
        let z = random_point(2, 1);
        let id = RMat::identity(4, 4);
        assert!(linalg::cmax_abs(&(mobius(&id, &z).unwrap().to_complex() - z.to_complex())) < 1e-14);

        let base = SiegelPoint::base(2).unwrap();
        let fixed = mobius(&j0(2), &base).unwrap();
        assert!(linalg::cmax_abs(&(fixed.to_complex() - base.to_complex())) < 1e-14);

        let b = linalg::symmetrize(&sampling::real(2, 2, &mut sampling::rng(4)));
        let g = from_blocks(&RMat::identity(2, 2), &b, &RMat::zeros(2, 2), &RMat::identity(2, 2));
        let shifted = mobius(&g, &z).unwrap();
        assert!(max_abs(&(shifted.x() - (z.x() + &b))) < 1e-14);
        assert!(max_abs(&(shifted.y() - z.y())) < 1e-14);
    }

    #[test]
    fn mobius_rejects_non_symplectic() {
        let g = RMat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        assert!(matches!(mobius(&g, &SiegelPoint::base(1).unwrap()), Err(Error::NotSymplectic(_))));
    }

    #[test]
    fn mobius_group_law() {
        for n in 1..=3 {
            for seed in 0..10 {
                let g1 = random_sp(n, 2 * seed).unwrap();
                let g2 = random_sp(n, 2 * seed + 1).unwrap();
                let z = random_point(n, seed);
                let lhs = mobius(&(&g1 * &g2), &z).unwrap();
                let rhs = mobius(&g1, &mobius(&g2, &z).unwrap()).unwrap();
                let dev = linalg::cmax_abs(&(lhs.to_complex() - rhs.to_complex()));
                assert!(dev < 1e-8, "n={n} seed={seed} dev={dev:e}");
            }
        }
    }

    #[test]
    fn phi_examples() {
        for n in 1..=4 {
            let j = phi(&SiegelPoint::base(n).unwrap()).unwrap();
            assert_eq!(j.matrix(), &j0(n));
            assert_eq!(j.index(), 0);
        }
        let z = SiegelPoint::new(RMat::from_element(1, 1, 1.0), RMat::from_element(1, 1, 1.0)).unwrap();
        let j = phi(&z).unwrap();
        let expected = RMat::from_row_slice(2, 2, &[1.0, -2.0, 1.0, -1.0]);
        assert!(max_abs(&(j.matrix() - &expected)) < 1e-15);
        assert!(max_abs(&(&expected * &expected + RMat::identity(2, 2))) == 0.0);
    }

    #[test]
    fn phi_inverse_examples() {
        let j = CompatibleStructure::standard(j0(2)).unwrap();
        let z = phi_inverse(&j).unwrap();
        assert!(linalg::cmax_abs(&(z.to_complex() - SiegelPoint::base(2).unwrap().to_complex())) < 1e-15);

        let j = CompatibleStructure::standard(RMat::from_row_slice(2, 2, &[1.0, -2.0, 1.0, -1.0])).unwrap();
        let z = phi_inverse(&j).unwrap();
        assert!((z.to_complex()[(0, 0)] - c(1.0, 1.0)).norm() < 1e-15);

        let minus = CompatibleStructure::standard(-j0(1)).unwrap();
        assert!(matches!(phi_inverse(&minus), Err(Error::NotCompatible(_))));

        for n in 1..=3 {
            for seed in 0..10 {
                let g = random_sp(n, seed).unwrap();
                let jg = CompatibleStructure::standard(&g * j0(n) * g.clone().try_inverse().unwrap()).unwrap();
                let z = phi_inverse(&jg).unwrap();
                let w = mobius(&g, &SiegelPoint::base(n).unwrap()).unwrap();
                let dev = linalg::cmax_abs(&(z.to_complex() - w.to_complex()));
                assert!(dev < 1e-8, "n={n} seed={seed} dev={dev:e}");
            }
        }
    }

    #[test]
    fn round_trips() {
        for n in 1..=3 {
            for seed in 0..10 {
                let z = random_point(n, seed);
                let back = phi_inverse(&phi(&z).unwrap()).unwrap();
                assert!(linalg::cmax_abs(&(back.to_complex() - z.to_complex())) < 1e-8);
                let j = phi(&z).unwrap();
                let again = phi(&phi_inverse(&j).unwrap()).unwrap();
                assert!(max_abs(&(again.matrix() - j.matrix())) < 1e-8);
            }
        }
    }

    #[test]
    fn antiholomorphy_at_base_point() {
        let z = SiegelPoint::base(1).unwrap();
        let h = CMat::identity(1, 1);
        assert!(antiholomorphy_residual(&z, &h, 1e-5).unwrap() <= 1e-6);
        assert!(tangency_residual(&z, &h, 1e-5).unwrap() <= 1e-6);
    }

    #[test]
    fn antiholomorphy_second_order() {
        for n in 1..=2 {
            for seed in 0..5 {
                let z = random_point(n, 100 + seed);
                let h = sampling::complex_symmetric(n, &mut sampling::rng(200 + seed));
                assert!(antiholomorphy_residual(&z, &h, 1e-5).unwrap() <= 1e-6);
                assert!(tangency_residual(&z, &h, 1e-5).unwrap() <= 1e-6);
                let coarse = antiholomorphy_residual(&z, &h, 1e-3).unwrap();
                let fine = antiholomorphy_residual(&z, &h, 5e-4).unwrap();
                let ratio = coarse / fine;
                assert!((3.0..5.0).contains(&ratio), "n={n} seed={seed} ratio={ratio}");
            }
        }
    }

    #[test]
    fn antiholomorphy_errors() {
        let z = SiegelPoint::base(1).unwrap();
        let h = CMat::identity(1, 1);
        assert!(matches!(antiholomorphy_residual(&z, &h, 1e-2), Err(Error::InvalidStep(_))));
        assert!(matches!(antiholomorphy_residual(&z, &h, 0.0), Err(Error::InvalidStep(_))));
        // y = 1e-4: a step of 1e-3 along iH pushes Im z negative.
        let thin = SiegelPoint::new(RMat::zeros(1, 1), RMat::from_element(1, 1, 1e-4)).unwrap();
        assert!(matches!(antiholomorphy_residual(&thin, &h, 1e-3), Err(Error::StepLeavesDomain(_))));
        let asym = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            antiholomorphy_residual(&SiegelPoint::base(2).unwrap(), &asym, 1e-5),
            Err(Error::NotSymmetric(_))
        ));
    }

    #[test]
    fn embed_unitary_examples() {
        assert_eq!(embed_unitary(&CMat::identity(2, 2), true).unwrap(), RMat::identity(4, 4));
        let g = embed_unitary(&CMat::from_element(1, 1, I), true).unwrap();
        assert_eq!(g, RMat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        assert_eq!(g, -j0(1));
        assert!(fixes_base_point(&g).unwrap());
        assert!(matches!(
            embed_unitary(&CMat::from_element(1, 1, c(2.0, 0.0)), true),
            Err(Error::NotUnitary(_))
        ));
        for seed in 0..10 {
            let a = sampling::unitary(3, &mut sampling::rng(seed));
            let g = embed_unitary(&a, true).unwrap();
            let base = SiegelPoint::base(3).unwrap();
            let image = mobius(&g, &base).unwrap();
            assert!(linalg::cmax_abs(&(image.to_complex() - base.to_complex())) <= 1e-9);
            assert!(has_unitary_blocks(&g));
        }
    }

    #[test]
    fn stabilizer_matches_block_shape() {
        for n in 1..=3 {
            for seed in 0..10 {
                let g = random_sp(n, seed).unwrap();
                assert_eq!(fixes_base_point(&g).unwrap(), has_unitary_blocks(&g));
                let k = embed_unitary(&sampling::unitary(n, &mut sampling::rng(seed)), true).unwrap();
                assert!(fixes_base_point(&k).unwrap() && has_unitary_blocks(&k));
                // g k g⁻¹ generally leaves the stabilizer.
                let moved = &g * &k * g.clone().try_inverse().unwrap();
                assert_eq!(fixes_base_point(&moved).unwrap(), has_unitary_blocks(&moved));
            }
        }
    }

    #[test]
    fn siegel_point_json_shape() {
        let z = SiegelPoint::base(1).unwrap();
        let json = serde_json::to_string(&z).unwrap();
        assert_eq!(json, r#"{"x":[[0.0]],"y":[[1.0]]}"#);
        assert_eq!(serde_json::from_str::<SiegelPoint>(&json).unwrap(), z);
        assert!(serde_json::from_str::<SiegelPoint>(r#"{"x":[[0.0]],"y":[[-1.0]]}"#).is_err());
    }
}
