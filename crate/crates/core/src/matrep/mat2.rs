use crate::coeffring::{CoefficientRing, Elem, SubmoduleIdeal};
use crate::error::{Error, Result};

/// 2x2 matrix over a coefficient ring, row major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2(pub [Elem; 4]);

impl Mat2 {
    pub fn new(a: Elem, b: Elem, c: Elem, d: Elem) -> Self {
        Mat2([a, b, c, d])
    }

    pub fn from_ints(r: &CoefficientRing, m: [i64; 4]) -> Self {
        Mat2(m.map(|x| r.from_int(x)))
    }

    pub fn identity(r: &CoefficientRing) -> Self {
        Mat2::from_ints(r, [1, 0, 0, 1])
    }

    pub fn zero(r: &CoefficientRing) -> Self {
        Mat2::from_ints(r, [0, 0, 0, 0])
    }

    pub fn scalar(r: &CoefficientRing, s: &Elem) -> Self {
        Mat2::new(s.clone(), r.zero(), r.zero(), s.clone())
    }

    /// `[[1,0],[1,1]]`
    pub fn lower_unipotent(r: &CoefficientRing) -> Self {
        Mat2::from_ints(r, [1, 0, 1, 1])
    }

    /// `[[0,1],[1,0]]`
    pub fn swap(r: &CoefficientRing) -> Self {
        Mat2::from_ints(r, [0, 1, 1, 0])
    }

    /// `E11, E12, E21, E22` in that order.
    pub fn unit_matrix(r: &CoefficientRing, idx: usize) -> Self {
        let mut m = [0; 4];
        m[idx] = 1;
        Mat2::from_ints(r, m)
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.0[2 * i + j]
    }

    pub fn add(&self, r: &CoefficientRing, o: &Mat2) -> Mat2 {
        Mat2(std::array::from_fn(|i| r.add(&self.0[i], &o.0[i])))
    }

    pub fn sub(&self, r: &CoefficientRing, o: &Mat2) -> Mat2 {
        Mat2(std::array::from_fn(|i| r.sub(&self.0[i], &o.0[i])))
    }

    pub fn scale(&self, r: &CoefficientRing, s: &Elem) -> Mat2 {
        Mat2(std::array::from_fn(|i| r.mul(&self.0[i], s)))
    }

    pub fn mul(&self, r: &CoefficientRing, o: &Mat2) -> Mat2 {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &o.0;
        Mat2([
            r.add(&r.mul(a, e), &r.mul(b, g)),
            r.add(&r.mul(a, f), &r.mul(b, h)),
            r.add(&r.mul(c, e), &r.mul(d, g)),
            r.add(&r.mul(c, f), &r.mul(d, h)),
        ])
    }

    pub fn det(&self, r: &CoefficientRing) -> Elem {
        let [a, b, c, d] = &self.0;
        r.sub(&r.mul(a, d), &r.mul(b, c))
    }

    pub fn trace(&self, r: &CoefficientRing) -> Elem {
        r.add(&self.0[0], &self.0[3])
    }

    pub fn is_invertible(&self, r: &CoefficientRing) -> bool {
        r.is_unit(&self.det(r))
    }

    pub fn inv(&self, r: &CoefficientRing) -> Result<Mat2> {
        let di = r.inv(&self.det(r)).map_err(|_| Error::NotInvertible)?;
        let [a, b, c, d] = &self.0;
        Ok(Mat2([
            r.mul(d, &di),
            r.neg(&r.mul(b, &di)),
            r.neg(&r.mul(c, &di)),
            r.mul(a, &di),
        ]))
    }

    pub fn pow(&self, r: &CoefficientRing, mut e: u64) -> Mat2 {
        let mut base = self.clone();
        let mut acc = Mat2::identity(r);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(r, &base);
            }
            base = base.mul(r, &base);
            e >>= 1;
        }
        acc
    }

    /// `a * self * a^-1`.
    pub fn conj(&self, r: &CoefficientRing, a: &Mat2, a_inv: &Mat2) -> Mat2 {
        a.mul(r, self).mul(r, a_inv)
    }

    /// Every entry lies in `ideal`.
    pub fn entries_in(&self, ideal: &SubmoduleIdeal) -> bool {
        self.0.iter().all(|x| ideal.contains(x))
    }

    /// `self ≡ Id` modulo the maximal ideal.
    pub fn is_residually_identity(&self, r: &CoefficientRing) -> bool {
        let d = self.sub(r, &Mat2::identity(r));
        d.0.iter().all(|x| r.in_maximal_ideal(x))
    }

    pub fn map(&self, f: impl Fn(&Elem) -> Elem) -> Mat2 {
        Mat2(std::array::from_fn(|i| f(&self.0[i])))
    }

    pub fn fmt_with(&self, r: &CoefficientRing) -> String {
        format!(
            "[[{}, {}], [{}, {}]]",
            r.fmt_elem(&self.0[0]),
            r.fmt_elem(&self.0[1]),
            r.fmt_elem(&self.0[2]),
            r.fmt_elem(&self.0[3])
        )
    }
}
