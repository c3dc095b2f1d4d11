use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;

use super::rat::Rat;

/// Integer coefficients of the cyclotomic polynomial `Phi_q`, lowest degree first.
pub fn cyclotomic_poly(q: u32) -> &'static [i64] {
    assert!(q >= 1);
    static SMALL: OnceLock<Vec<OnceLock<&'static [i64]>>> = OnceLock::new();
    static LARGE: OnceLock<Mutex<HashMap<u32, &'static [i64]>>> = OnceLock::new();
    let small = SMALL.get_or_init(|| (0..512).map(|_| OnceLock::new()).collect());
    if (q as usize) < small.len() {
        return small[q as usize].get_or_init(|| Box::leak(compute_phi(q).into_boxed_slice()));
    }
    let mut map = LARGE.get_or_init(|| Mutex::new(HashMap::new())).lock().unwrap();
    map.entry(q).or_insert_with(|| Box::leak(compute_phi(q).into_boxed_slice()))
}

fn compute_phi(q: u32) -> Vec<i64> {
    // x^q - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; q as usize + 1];
    num[0] = -1;
    num[q as usize] = 1;
    for d in 1..q {
        if q % d == 0 {
            num = div_exact(&num, cyclotomic_poly(d));
        }
    }
    num
}

fn div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db];
    debug_assert!(lead == 1);
    let mut out = vec![0i64; a.len() - db];
    for i in (0..out.len()).rev() {
        let c = r[i + db] / lead;
        out[i] = c;
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|x| *x == 0));
    out
}

/// Euler's totient.
pub fn totient(q: u32) -> u32 {
    let mut n = q;
    let mut out = q;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// Element of the cyclotomic field Q(zeta_q), stored in the power basis
/// `1, zeta, ..., zeta^(phi(q)-1)` with `zeta = exp(2 pi i / q)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloRat {
    q: u32,
    c: Vec<Rat>,
}

impl CycloRat {
    pub fn zero(q: u32) -> CycloRat {
        CycloRat { q, c: vec![Rat::zero(); totient(q) as usize] }
    }

    pub fn one(q: u32) -> CycloRat {
        CycloRat::from_rat(q, Rat::one())
    }

    pub fn from_rat(q: u32, r: Rat) -> CycloRat {
        let mut z = CycloRat::zero(q);
        z.c[0] = r;
        z
    }

    /// Builds an element from power-basis coordinates (length must be `phi(q)`).
    pub fn from_coeffs(q: u32, c: Vec<Rat>) -> CycloRat {
        assert_eq!(c.len(), totient(q) as usize, "wrong coefficient count for q = {}", q);
        CycloRat { q, c }
    }

    /// `zeta_q^e` for any integer `e`.
    pub fn zeta_pow(q: u32, e: i64) -> CycloRat {
        let e = e.rem_euclid(q as i64) as usize;
        let mut v = vec![Rat::zero(); e.max(1) + 1];
        v[e] = Rat::one();
        CycloRat { q, c: reduce(q, v) }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Rat::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(Rat::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn to_rat(&self) -> Option<Rat> {
        if self.is_rational() {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element in Q(zeta_m) for a multiple `m` of `q`.
    pub fn embed(&self, m: u32) -> CycloRat {
        if m == self.q {
            return self.clone();
        }
        assert!(m % self.q == 0, "cannot embed Q(zeta_{}) into Q(zeta_{})", self.q, m);
        let step = (m / self.q) as usize;
        let mut v = vec![Rat::zero(); step * self.c.len().max(1)];
        for (i, a) in self.c.iter().enumerate() {
            v[i * step] = a.clone();
        }
        CycloRat { q: m, c: reduce(m, v) }
    }

    fn common(a: &CycloRat, b: &CycloRat) -> (CycloRat, CycloRat) {
        let m = a.q.lcm(&b.q);
        (a.embed(m), b.embed(m))
    }

    pub fn add(&self, o: &CycloRat) -> CycloRat {
        if self.q != o.q {
            let (a, b) = CycloRat::common(self, o);
            return a.add(&b);
        }
        CycloRat { q: self.q, c: self.c.iter().zip(&o.c).map(|(x, y)| x + y).collect() }
    }

    pub fn add_assign(&mut self, o: &CycloRat) {
        if self.q != o.q {
            *self = self.add(o);
            return;
        }
        for (x, y) in self.c.iter_mut().zip(&o.c) {
            if !y.is_zero() {
                *x += y;
            }
        }
    }

    pub fn sub(&self, o: &CycloRat) -> CycloRat {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> CycloRat {
        CycloRat { q: self.q, c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, r: &Rat) -> CycloRat {
        CycloRat { q: self.q, c: self.c.iter().map(|x| x * r).collect() }
    }

    pub fn mul(&self, o: &CycloRat) -> CycloRat {
        if self.q != o.q {
            let (a, b) = CycloRat::common(self, o);
            return a.mul(&b);
        }
        let n = self.c.len();
        if n == 1 {
            return CycloRat { q: self.q, c: vec![&self.c[0] * &o.c[0]] };
        }
        let mut v = vec![Rat::zero(); 2 * n - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                v[i + j].add_mul(a, b);
            }
        }
        CycloRat { q: self.q, c: reduce(self.q, v) }
    }

    pub fn pow(&self, e: i64) -> CycloRat {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let mut acc = CycloRat::one(self.q);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse, by solving the linear system of multiplication-by-self.
    pub fn inv(&self) -> CycloRat {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.c.len();
        if n == 1 {
            return CycloRat { q: self.q, c: vec![self.c[0].inv()] };
        }
        // column j = self * zeta^j
        let mut cols = Vec::with_capacity(n);
        let mut cur = self.clone();
        let zeta = CycloRat::zeta_pow(self.q, 1);
        for _ in 0..n {
            cols.push(cur.c.clone());
            cur = cur.mul(&zeta);
        }
        let mut m: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rat> = (0..n).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { Rat::one() } else { Rat::zero() });
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero()).expect("singular multiplication matrix");
            m.swap(col, piv);
            let inv = m[col][col].inv();
            for x in m[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for k in col..=n {
                        let t = &m[col][k] * &f;
                        m[r][k] -= &t;
                    }
                }
            }
        }
        CycloRat { q: self.q, c: m.into_iter().map(|row| row[n].clone()).collect() }
    }

    pub fn div(&self, o: &CycloRat) -> CycloRat {
        self.mul(&o.inv())
    }

    /// Galois automorphism `zeta -> zeta^j` (`gcd(j, q) = 1`).
    pub fn galois(&self, j: i64) -> CycloRat {
        let mut acc = CycloRat::zero(self.q);
        for (i, a) in self.c.iter().enumerate() {
            if !a.is_zero() {
                acc.add_assign(&CycloRat::zeta_pow(self.q, j * i as i64).scale(a));
            }
        }
        acc
    }

    /// Tries to write the element inside the subfield Q(zeta_d), `d | q`.
    pub fn restrict(&self, d: u32) -> Option<CycloRat> {
        if d == self.q {
            return Some(self.clone());
        }
        if self.q % d != 0 {
            return None;
        }
        if self.is_rational() {
            return Some(CycloRat::from_rat(d, self.c[0].clone()));
        }
        let n = totient(d) as usize;
        let m = self.c.len();
        // columns: images of the subfield basis
        let basis: Vec<CycloRat> = (0..n).map(|i| CycloRat::zeta_pow(d, i as i64).embed(self.q)).collect();
        let mut rows: Vec<Vec<Rat>> = (0..m)
            .map(|i| {
                let mut r: Vec<Rat> = basis.iter().map(|b| b.c[i].clone()).collect();
                r.push(self.c[i].clone());
                r
            })
            .collect();
        let mut piv_cols = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..m).find(|&r| !rows[r][col].is_zero()) else { continue };
            rows.swap(row, p);
            let inv = rows[row][col].inv();
            for x in rows[row].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..m {
                if r != row && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    for k in col..=n {
                        let t = &rows[row][k] * &f;
                        rows[r][k] -= &t;
                    }
                }
            }
            piv_cols.push(col);
            row += 1;
        }
        if rows[row..].iter().any(|r| !r[n].is_zero()) {
            return None;
        }
        let mut out = vec![Rat::zero(); n];
        for (i, c) in piv_cols.iter().enumerate() {
            out[*c] = rows[i][n].clone();
        }
        Some(CycloRat { q: d, c: out })
    }

    /// Smallest `d | q` such that the element lies in Q(zeta_d).
    pub fn minimal_field(&self) -> CycloRat {
        let mut divs: Vec<u32> = (1..=self.q).filter(|d| self.q % d == 0).collect();
        divs.sort_unstable();
        for d in divs {
            if let Some(r) = self.restrict(d) {
                return r;
            }
        }
        self.clone()
    }

    /// Approximate complex value, for display and sanity checks only.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, a) in self.c.iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * i as f64 / self.q as f64;
            re += a.to_f64() * t.cos();
            im += a.to_f64() * t.sin();
        }
        (re, im)
    }
}

/// Reduces a polynomial in zeta modulo `Phi_q`.
fn reduce(q: u32, mut v: Vec<Rat>) -> Vec<Rat> {
    let phi = cyclotomic_poly(q);
    let n = phi.len() - 1;
    if v.len() <= n {
        v.resize(n, Rat::zero());
        return v;
    }
    for top in (n..v.len()).rev() {
        let c = std::mem::take(&mut v[top]);
        if c.is_zero() {
            continue;
        }
        for (i, p) in phi[..n].iter().enumerate() {
            if *p != 0 {
                let t = &c * &Rat::from_int(*p);
                v[top - n + i] -= &t;
            }
        }
    }
    v.truncate(n);
    v
}

impl fmt::Display for CycloRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.c[0].pretty());
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", a.pretty())?,
                1 => write!(f, "({})*z{}", a.pretty(), self.q)?,
                _ => write!(f, "({})*z{}^{}", a.pretty(), self.q, i)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn phi_values() {
        assert_eq!(cyclotomic_poly(1), &[-1, 1]);
        assert_eq!(cyclotomic_poly(2), &[1, 1]);
        assert_eq!(cyclotomic_poly(4), &[1, 0, 1]);
        assert_eq!(cyclotomic_poly(12), &[1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(105).len() - 1, 48);
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn roots_of_unity() {
        for q in [1u32, 2, 3, 4, 5, 6, 12] {
            let z = CycloRat::zeta_pow(q, 1);
            assert_eq!(z.pow(q as i64), CycloRat::one(q));
            let s = (0..q as i64).fold(CycloRat::zero(q), |a, e| a.add(&CycloRat::zeta_pow(q, e)));
            if q > 1 {
                assert!(s.is_zero());
            }
        }
        assert_eq!(CycloRat::zeta_pow(2, 1).to_rat(), Some(Rat::from_int(-1)));
    }

    #[test]
    fn subfield_detection() {
        // zeta_12^4 = zeta_3
        let a = CycloRat::zeta_pow(12, 4);
        let r = a.restrict(3).unwrap();
        assert_eq!(r, CycloRat::zeta_pow(3, 1));
        assert!(CycloRat::zeta_pow(12, 1).restrict(3).is_none());
        assert_eq!(CycloRat::zeta_pow(12, 6).minimal_field(), CycloRat::from_rat(1, Rat::from_int(-1)));
    }

    fn arb(q: u32) -> impl Strategy<Value = CycloRat> {
        proptest::collection::vec((-20i64..20, 1i64..6), totient(q) as usize)
            .prop_map(move |v| CycloRat::from_coeffs(q, v.into_iter().map(|(n, d)| Rat::new(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb(12), b in arb(12), c in arb(12)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            if !a.is_zero() {
                prop_assert_eq!(a.mul(&a.inv()), CycloRat::one(12));
            }
        }

        #[test]
        fn embedding_is_a_homomorphism(a in arb(3), b in arb(3)) {
            prop_assert_eq!(a.mul(&b).embed(12), a.embed(12).mul(&b.embed(12)));
            prop_assert_eq!(a.embed(12).restrict(3), Some(a.clone()));
        }

        #[test]
        fn galois_preserves_products(a in arb(5), b in arb(5), j in 1i64..5) {
            prop_assert_eq!(a.mul(&b).galois(j), a.galois(j).mul(&b.galois(j)));
        }
    }
}
