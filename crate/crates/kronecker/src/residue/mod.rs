//! Iterated residues of products of exponential factors, and the constant-term limit for
//! singular cosets.

pub mod engine;
pub mod epsilon;
pub mod laurent;
pub mod series;

pub use engine::{prepare, q_expand, Closure, ExpFactor, Prepared, MAXR};
pub use epsilon::{epsilon_constant_term, EpsFactor, EpsTerm};
pub use laurent::{expand_exponential, expand_factor, expand_one_minus_exp, NestedLaurent};
pub use series::bernoulli;

use crate::error::{KronError, Result};
use crate::exact::{Coeff, Rat};
use crate::linalg::{coords_in_basis, det_int, IVec};
use crate::quasipoly::MPoly;

/// `prefactor * e^{<shift, z>} * prod (1 - zeta e^{-<ell, z>})^{-n}`; `zeta = None` means 1.
#[derive(Clone, Debug)]
pub struct FactoredFunction<C> {
    pub shift: Vec<Rat>,
    pub factors: Vec<(Option<C>, IVec, i32)>,
    pub prefactor: C,
}

fn sigma_coords<C: Coeff>(sigma: &[IVec], f: &FactoredFunction<C>) -> Result<(Vec<ExpFactor<C>>, Vec<Rat>, Rat)> {
    let r = sigma.len();
    let d = det_int(sigma);
    if d == 0 {
        return Err(KronError::InvalidInput("sigma is not a basis".into()));
    }
    let ells: Vec<IVec> = f.factors.iter().map(|x| x.1.clone()).collect();
    let coords = coords_in_basis(sigma, &ells).unwrap();
    let factors = f
        .factors
        .iter()
        .zip(coords)
        .map(|((z, _, n), c)| ExpFactor { coords: c, zeta: z.clone(), n: *n })
        .collect();
    // <shift, z> = sum_j <shift, sigma_j^*> z_j: coordinates of shift in the basis
    let b: Vec<Vec<Rat>> = (0..r).map(|i| (0..r).map(|j| Rat::from_int(sigma[j][i])).collect()).collect();
    let inv = crate::linalg::inverse(&b).unwrap();
    let shift = crate::linalg::mat_vec(&inv, &f.shift);
    Ok((factors, shift, Rat::new(1, d.abs())))
}

/// Iterated residue along the ordered basis `sigma` (innermost variable last), including
/// the `1/|det sigma|` normalization.
pub fn iterated_residue<C: Coeff>(sigma: &[IVec], f: &FactoredFunction<C>) -> Result<C> {
    let r = sigma.len();
    let (factors, shift, vol) = sigma_coords(sigma, f)?;
    let one = f.prefactor.one_like();
    let p = prepare(r, &factors, &shift, &one)?;
    Ok(p.pair_constant(r, &one).cmul(&f.prefactor).cmul_rat(&vol))
}

/// Residue of `f * e^{k <dir, z>}` as a polynomial in `k` (coefficients by degree).
pub fn iterated_residue_dilated<C: Coeff>(sigma: &[IVec], f: &FactoredFunction<C>, dir: &[Rat]) -> Result<Vec<C>> {
    let r = sigma.len();
    let (factors, shift, vol) = sigma_coords(sigma, f)?;
    let one = f.prefactor.one_like();
    let b: Vec<Vec<Rat>> = (0..r).map(|i| (0..r).map(|j| Rat::from_int(sigma[j][i])).collect()).collect();
    let a = crate::linalg::mat_vec(&crate::linalg::inverse(&b).unwrap(), dir);
    let p = prepare(r, &factors, &shift, &one)?;
    Ok(p.pair_dilated(r, &a, &one).into_iter().map(|c| c.cmul(&f.prefactor).cmul_rat(&vol)).collect())
}

/// Residue of `f * e^{<v, z>}` as a polynomial in the coordinates of `v`.
pub fn iterated_residue_symbolic<C: Coeff>(sigma: &[IVec], f: &FactoredFunction<C>) -> Result<MPoly<C>> {
    let r = sigma.len();
    let (factors, shift, vol) = sigma_coords(sigma, f)?;
    let one = f.prefactor.one_like();
    let p = prepare(r, &factors, &shift, &one)?;
    let scale = f.prefactor.cmul_rat(&vol);
    let poly = MPoly::from_terms(
        r,
        p.pair_symbolic(r, &one).into_iter().map(|(e, c)| (e[..r].iter().map(|&x| x as u32).collect(), c.cmul(&scale))),
    );
    // a = B^{-1} v
    let b: Vec<Vec<Rat>> = (0..r).map(|i| (0..r).map(|j| Rat::from_int(sigma[j][i])).collect()).collect();
    let inv = crate::linalg::inverse(&b).unwrap();
    let images: Vec<MPoly<C>> = inv
        .iter()
        .map(|row| {
            MPoly::from_terms(
                r,
                row.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| {
                    let mut m = vec![0; r];
                    m[i] = 1;
                    (m, one.from_rat_like(x))
                }),
            )
        })
        .collect();
    Ok(poly.compose(&images, r))
}

/// The same residue computed literally: every factor is expanded as a truncated nested
/// Laurent series on a box large enough for the `z^{-1}` coefficient to be exact.
pub fn iterated_residue_direct<C: Coeff>(sigma: &[IVec], f: &FactoredFunction<C>) -> Result<C> {
    let r = sigma.len();
    let (factors, shift, vol) = sigma_coords(sigma, f)?;
    let one = f.prefactor.one_like();
    // pole orders by lead variable
    let mut lead_poles = vec![0i32; r];
    let mut extra = 0i32;
    let mut total = 0i32;
    for fa in &factors {
        match (&fa.zeta, fa.coords.iter().position(|x| !x.is_zero())) {
            (None, Some(j)) => {
                if fa.n > 0 {
                    lead_poles[j] += fa.n;
                }
                total += fa.n;
                extra += fa.n.abs();
            }
            (None, None) => return Err(KronError::InvalidInput("identically singular factor".into())),
            _ => extra += fa.n.abs(),
        }
    }
    let d = (total - r as i32).max(0) + extra;
    let mut t = vec![0i32; r + 1];
    let mut lo = vec![0i32; r];
    let mut hi = vec![0i32; r];
    for j in (0..r).rev() {
        lo[j] = -(lead_poles[j] + t[j + 1]) - 1;
        hi[j] = d + t[j + 1];
        t[j] = 2 * t[j + 1] + lead_poles[j] + d;
    }
    let mut acc = expand_exponential(&shift.iter().map(|s| one.from_rat_like(s)).collect::<Vec<_>>(), &lo, &hi, &one);
    for fa in &factors {
        let s = expand_factor(fa.zeta.as_ref(), &fa.coords, fa.n, &lo, &hi, &one)?;
        acc = acc.mul_into(&s, lo.clone(), hi.clone());
    }
    Ok(acc.residue(&one).cmul(&f.prefactor).cmul_rat(&vol))
}
