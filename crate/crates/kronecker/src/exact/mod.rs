//! Exact scalars: rationals and cyclotomic fields.

mod cyclo;
mod rat;

pub use cyclo::{cyclotomic_poly, totient, CycloRat};
pub use rat::{binomial, factorial, ParseRatError, Rat};

use std::fmt::Debug;

/// `zeta_q^a` reduced modulo `Phi_q`.
pub fn cyclo_pow(q: u32, a: i64) -> CycloRat {
    CycloRat::zeta_pow(q, a)
}

/// Inverse in Q(zeta_q); `None` for zero.
pub fn cyclo_inverse(v: &CycloRat) -> Option<CycloRat> {
    if v.is_zero() {
        None
    } else {
        Some(v.inv())
    }
}

pub fn is_root_of_unity_one(q: u32, a: i64) -> bool {
    a.rem_euclid(q as i64) == 0
}

/// Minimal ring interface shared by `Rat` and `CycloRat`, used by the series code
/// so that the all-rational case never pays for cyclotomic reduction.
pub trait Coeff: Clone + Debug + PartialEq + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rat_like(&self, r: &Rat) -> Self;
    fn cis_zero(&self) -> bool;
    fn cadd(&mut self, o: &Self);
    fn csub(&mut self, o: &Self);
    fn cmul(&self, o: &Self) -> Self;
    fn cmul_rat(&self, r: &Rat) -> Self;
    fn cneg(&self) -> Self;
    fn cinv(&self) -> Self;
    fn cadd_mul(&mut self, a: &Self, b: &Self) {
        if a.cis_zero() || b.cis_zero() {
            return;
        }
        let p = a.cmul(b);
        self.cadd(&p);
    }
    /// Embeds into Q(zeta_q).
    fn to_cyclo(&self, q: u32) -> CycloRat;
    fn pretty(&self) -> String;
}

impl Coeff for Rat {
    fn zero_like(&self) -> Rat {
        Rat::zero()
    }
    fn one_like(&self) -> Rat {
        Rat::one()
    }
    fn from_rat_like(&self, r: &Rat) -> Rat {
        r.clone()
    }
    fn cis_zero(&self) -> bool {
        self.is_zero()
    }
    fn cadd(&mut self, o: &Rat) {
        if !o.is_zero() {
            *self += o;
        }
    }
    fn csub(&mut self, o: &Rat) {
        if !o.is_zero() {
            *self -= o;
        }
    }
    fn cmul(&self, o: &Rat) -> Rat {
        self * o
    }
    fn cmul_rat(&self, r: &Rat) -> Rat {
        self * r
    }
    fn cneg(&self) -> Rat {
        -self
    }
    fn cinv(&self) -> Rat {
        self.inv()
    }
    fn cadd_mul(&mut self, a: &Rat, b: &Rat) {
        self.add_mul(a, b);
    }
    fn to_cyclo(&self, q: u32) -> CycloRat {
        CycloRat::from_rat(q, self.clone())
    }
    fn pretty(&self) -> String {
        Rat::pretty(self)
    }
}

impl Coeff for CycloRat {
    fn zero_like(&self) -> CycloRat {
        CycloRat::zero(self.q())
    }
    fn one_like(&self) -> CycloRat {
        CycloRat::one(self.q())
    }
    fn from_rat_like(&self, r: &Rat) -> CycloRat {
        CycloRat::from_rat(self.q(), r.clone())
    }
    fn cis_zero(&self) -> bool {
        self.is_zero()
    }
    fn cadd(&mut self, o: &CycloRat) {
        self.add_assign(o);
    }
    fn csub(&mut self, o: &CycloRat) {
        self.add_assign(&o.neg());
    }
    fn cmul(&self, o: &CycloRat) -> CycloRat {
        self.mul(o)
    }
    fn cmul_rat(&self, r: &Rat) -> CycloRat {
        self.scale(r)
    }
    fn cneg(&self) -> CycloRat {
        self.neg()
    }
    fn cinv(&self) -> CycloRat {
        self.inv()
    }
    fn to_cyclo(&self, q: u32) -> CycloRat {
        self.embed(q)
    }
    fn pretty(&self) -> String {
        self.to_string()
    }
}
