//! A finite Čech model of `RΓ(P¹, Ω^•(log D))` and its compactly supported
//! counterpart, on the charts `U0 = P¹ − ∞` (coordinate `x`) and
//! `U1 = P¹ − 0` (coordinate `y = 1/x`).
//!
//! All complexes for all subsets of the marked points live inside one
//! ambient total complex `A`:
//!
//! * `A^0 = O(U0) ⊕ O(U1)`, polynomials of degree `≤ N`;
//! * `A^1 = O(U01) ⊕ Ω(U0) ⊕ Ω(U1)`: Laurent polynomials with exponents in
//!   `[−N, N]`, then 1-forms on each chart as polynomials of degree `< N`
//!   plus simple poles `dx/(x−a)` (resp. `dy/(y−b)`) at the marked points;
//! * `A^2 = Ω(U01)`: Laurent 1-forms with exponents in `[−N−1, N−1]` plus
//!   simple poles at the marked points other than `0, ∞`.
//!
//! The differential is `D = d + (−1)^p δ` with `δ(s0, s1) = s1 − s0`. Each
//! sheaf window is a sum of monomial-degree pieces containing every degree
//! where the Čech complex has cohomology, so the windows compute the
//! hypercohomology exactly.

use crate::complexes::{ChainMap, Complex, Subcomplex, SubquotientComplex};
use crate::exactalg::{Field, Mat, Scalar, Subspace};

use super::arrangement::{P1Arrangement, ProjPoint};

#[derive(Clone, Debug)]
pub struct CechModel {
    field: Field,
    arr: P1Arrangement,
    n: usize,
    /// Affine marked points `(index, a)`.
    aff: Vec<(usize, Scalar)>,
    /// Marked points other than `0`, by `y`-coordinate (`0` for `∞`).
    ypts: Vec<(usize, Scalar)>,
    /// Marked points other than `0` and `∞`.
    mid: Vec<(usize, Scalar)>,
    ambient: Complex,
}

/// Which charts contain a point.
#[derive(Clone, Copy, Debug)]
struct Charts {
    u0: bool,
    u1: bool,
    u01: bool,
}

impl CechModel {
    pub fn new(arr: &P1Arrangement) -> CechModel {
        let field = arr.field();
        let n = arr.k() + 2;
        let mut aff = Vec::new();
        let mut ypts = Vec::new();
        let mut mid = Vec::new();
        for (i, p) in arr.points().iter().enumerate() {
            match p {
                ProjPoint::Infinity => ypts.push((i, field.zero())),
                ProjPoint::Affine(a) => {
                    aff.push((i, a.clone()));
                    if !field.is_zero(a) {
                        ypts.push((i, field.inv(a)));
                        mid.push((i, a.clone()));
                    }
                }
            }
        }
        let mut model = CechModel { field, arr: arr.clone(), n, aff, ypts, mid, ambient: Complex::zero(field) };
        model.ambient = model.build_ambient();
        model
    }

    pub fn arrangement(&self) -> &P1Arrangement {
        &self.arr
    }

    pub fn window(&self) -> usize {
        self.n
    }

    pub fn ambient(&self) -> &Complex {
        &self.ambient
    }

    // index layout

    fn f0(&self, j: usize) -> usize {
        j
    }

    fn f1(&self, i: usize) -> usize {
        self.n + 1 + i
    }

    fn c01f(&self, j: i64) -> usize {
        (j + self.n as i64) as usize
    }

    fn w0(&self, j: usize) -> usize {
        2 * self.n + 1 + j
    }

    fn w0pole(&self, t: usize) -> usize {
        3 * self.n + 1 + t
    }

    fn w1(&self, i: usize) -> usize {
        3 * self.n + 1 + self.aff.len() + i
    }

    fn w1pole(&self, t: usize) -> usize {
        4 * self.n + 1 + self.aff.len() + t
    }

    fn c01w(&self, j: i64) -> usize {
        (j + self.n as i64 + 1) as usize
    }

    fn c01pole(&self, t: usize) -> usize {
        2 * self.n + 1 + t
    }

    fn dims(&self) -> [usize; 3] {
        let n = self.n;
        [2 * n + 2, 4 * n + 1 + self.aff.len() + self.ypts.len(), 2 * n + 1 + self.mid.len()]
    }

    fn mid_index(&self, point: usize) -> Option<usize> {
        self.mid.iter().position(|(i, _)| *i == point)
    }

    fn build_ambient(&self) -> Complex {
        let f = self.field;
        let n = self.n;
        let [d0, d1, d2] = self.dims();
        let mut m0 = Mat::zeros(f, d1, d0);
        for j in 0..=n {
            m0.set(self.c01f(j as i64), self.f0(j), f.from_i64(-1));
            if j >= 1 {
                m0.set(self.w0(j - 1), self.f0(j), f.from_i64(j as i64));
            }
            m0.set(self.c01f(-(j as i64)), self.f1(j), f.one());
            if j >= 1 {
                m0.set(self.w1(j - 1), self.f1(j), f.from_i64(j as i64));
            }
        }
        let mut m1 = Mat::zeros(f, d2, d1);
        for j in -(n as i64)..=(n as i64) {
            if j != 0 {
                m1.set(self.c01w(j - 1), self.c01f(j), f.from_i64(j));
            }
        }
        // −δ on forms: +restriction from U0, −restriction from U1
        for j in 0..n {
            m1.set(self.c01w(j as i64), self.w0(j), f.one());
            m1.set(self.c01w(-(j as i64) - 2), self.w1(j), f.one());
        }
        for (t, (idx, a)) in self.aff.iter().enumerate() {
            if f.is_zero(a) {
                m1.set(self.c01w(-1), self.w0pole(t), f.one());
            } else {
                m1.set(self.c01pole(self.mid_index(*idx).unwrap()), self.w0pole(t), f.one());
            }
        }
        for (t, (idx, _)) in self.ypts.iter().enumerate() {
            // dy/y = −dx/x, and dy/(y − 1/a) = −dx/x + dx/(x − a)
            m1.set(self.c01w(-1), self.w1pole(t), f.one());
            if let Some(m) = self.mid_index(*idx) {
                m1.set(self.c01pole(m), self.w1pole(t), f.from_i64(-1));
            }
        }
        Complex::new(f, 0, vec![d0, d1, d2], vec![m0, m1]).expect("Čech model squares to zero")
    }

    fn coordinate_subcomplex(&self, keep: [Vec<usize>; 3]) -> Subcomplex {
        let dims = self.dims();
        let spaces = (0..3).map(|k| Subspace::coordinate(self.field, dims[k], keep[k].iter().copied())).collect();
        Subcomplex::new(&self.ambient, spaces).expect("window subcomplex")
    }

    fn in_mask(mask: u32, idx: usize) -> bool {
        mask & (1 << idx) != 0
    }

    fn keep_log(&self, mask: u32, with_functions: bool, with_poles: bool) -> [Vec<usize>; 3] {
        let n = self.n;
        let mut k0 = Vec::new();
        let mut k1 = Vec::new();
        if with_functions {
            k0.extend(0..2 * n + 2);
            k1.extend((-(n as i64)..=(n as i64)).map(|j| self.c01f(j)));
        }
        k1.extend((0..n).map(|j| self.w0(j)));
        k1.extend((0..n).map(|j| self.w1(j)));
        let mut k2: Vec<usize> = (-(n as i64) - 1..(n as i64)).map(|j| self.c01w(j)).collect();
        if with_poles {
            for (t, (idx, _)) in self.aff.iter().enumerate() {
                if Self::in_mask(mask, *idx) {
                    k1.push(self.w0pole(t));
                }
            }
            for (t, (idx, _)) in self.ypts.iter().enumerate() {
                if Self::in_mask(mask, *idx) {
                    k1.push(self.w1pole(t));
                }
            }
            for (t, (idx, _)) in self.mid.iter().enumerate() {
                if Self::in_mask(mask, *idx) {
                    k2.push(self.c01pole(t));
                }
            }
        }
        [k0, k1, k2]
    }

    /// `Ω^•(log D_T)` for the marked points selected by `mask`.
    pub fn log_sub(&self, mask: u32) -> Subcomplex {
        self.coordinate_subcomplex(self.keep_log(mask, true, true))
    }

    /// `P_0 = Ω^•`, forms without poles.
    pub fn pole_free_sub(&self) -> Subcomplex {
        self.coordinate_subcomplex(self.keep_log(0, true, false))
    }

    /// `σ^{≥1} Ω^•(log D_T)`, the 1-forms.
    pub fn forms_sub(&self, mask: u32) -> Subcomplex {
        self.coordinate_subcomplex(self.keep_log(mask, false, true))
    }

    /// `Ω^•_c(log D_T) = (O(−D_T) → Ω¹)`.
    pub fn compact_sub(&self, mask: u32) -> Subcomplex {
        let f = self.field;
        let n = self.n;
        let dims = self.dims();
        let mut c0: Vec<Vec<Scalar>> = Vec::new();
        for (idx, a) in &self.aff {
            if Self::in_mask(mask, *idx) {
                let mut row = vec![f.zero(); dims[0]];
                for j in 0..=n {
                    row[self.f0(j)] = f.pow(a, j as i64);
                }
                c0.push(row);
            }
        }
        for (idx, b) in &self.ypts {
            if Self::in_mask(mask, *idx) {
                let mut row = vec![f.zero(); dims[0]];
                for i in 0..=n {
                    row[self.f1(i)] = f.pow(b, i as i64);
                }
                c0.push(row);
            }
        }
        let mut c1: Vec<Vec<Scalar>> = Vec::new();
        for (idx, a) in &self.mid {
            if Self::in_mask(mask, *idx) {
                let mut row = vec![f.zero(); dims[1]];
                for j in -(n as i64)..=(n as i64) {
                    row[self.c01f(j)] = f.pow(a, j);
                }
                c1.push(row);
            }
        }
        let poles1: Vec<usize> = (0..self.aff.len()).map(|t| self.w0pole(t)).chain((0..self.ypts.len()).map(|t| self.w1pole(t))).collect();
        for p in poles1 {
            let mut row = vec![f.zero(); dims[1]];
            row[p] = f.one();
            c1.push(row);
        }
        let mut c2: Vec<Vec<Scalar>> = Vec::new();
        for t in 0..self.mid.len() {
            let mut row = vec![f.zero(); dims[2]];
            row[self.c01pole(t)] = f.one();
            c2.push(row);
        }
        let kernel = |rows: Vec<Vec<Scalar>>, dim: usize| {
            if rows.is_empty() {
                Subspace::full(f, dim)
            } else {
                Mat::from_rows(f, rows, dim).expect("row lengths").kernel()
            }
        };
        let spaces = vec![kernel(c0, dims[0]), kernel(c1, dims[1]), kernel(c2, dims[2])];
        Subcomplex::new(&self.ambient, spaces).expect("compactly supported window is a subcomplex")
    }

    fn charts(&self, point: usize) -> Charts {
        match &self.arr.points()[point] {
            ProjPoint::Infinity => Charts { u0: false, u1: true, u01: false },
            ProjPoint::Affine(a) if self.field.is_zero(a) => Charts { u0: true, u1: false, u01: false },
            ProjPoint::Affine(_) => Charts { u0: true, u1: true, u01: true },
        }
    }

    /// Čech complex of the skyscraper `k_x` placed in form degree `degree`.
    pub fn skyscraper(&self, point: usize, degree: i64) -> Complex {
        let c = self.charts(point);
        let d0 = c.u0 as usize + c.u1 as usize;
        let sign = if degree % 2 == 0 { 1 } else { -1 };
        if c.u01 {
            let d = Mat::from_i64(self.field, &[&[-sign, sign]]);
            Complex::new(self.field, degree, vec![d0, 1], vec![d]).expect("two-term complex")
        } else {
            Complex::concentrated(self.field, degree, d0)
        }
    }

    /// Residue at the marked point `point`, as matrices `k_x[−1]^n × A^n`.
    fn residue_rows(&self, point: usize) -> [Mat; 3] {
        let f = self.field;
        let dims = self.dims();
        let c = self.charts(point);
        let mut r1 = Vec::new();
        if c.u0 {
            let t = self.aff.iter().position(|(i, _)| *i == point).unwrap();
            let mut row = vec![f.zero(); dims[1]];
            row[self.w0pole(t)] = f.one();
            r1.push(row);
        }
        if c.u1 {
            let t = self.ypts.iter().position(|(i, _)| *i == point).unwrap();
            let mut row = vec![f.zero(); dims[1]];
            row[self.w1pole(t)] = f.one();
            r1.push(row);
        }
        let mut r2 = Vec::new();
        if c.u01 {
            let mut row = vec![f.zero(); dims[2]];
            row[self.c01pole(self.mid_index(point).unwrap())] = f.one();
            r2.push(row);
        }
        [
            Mat::zeros(f, 0, dims[0]),
            Mat::from_rows(f, r1, dims[1]).expect("rows"),
            Mat::from_rows(f, r2, dims[2]).expect("rows"),
        ]
    }

    /// Evaluation at the marked point `point`, as matrices `k_x^n × A^n`.
    fn evaluation_rows(&self, point: usize) -> [Mat; 3] {
        let f = self.field;
        let n = self.n;
        let dims = self.dims();
        let c = self.charts(point);
        let mut r0 = Vec::new();
        if c.u0 {
            let a = &self.aff.iter().find(|(i, _)| *i == point).unwrap().1;
            let mut row = vec![f.zero(); dims[0]];
            for j in 0..=n {
                row[self.f0(j)] = f.pow(a, j as i64);
            }
            r0.push(row);
        }
        if c.u1 {
            let b = &self.ypts.iter().find(|(i, _)| *i == point).unwrap().1;
            let mut row = vec![f.zero(); dims[0]];
            for i in 0..=n {
                row[self.f1(i)] = f.pow(b, i as i64);
            }
            r0.push(row);
        }
        let mut r1 = Vec::new();
        if c.u01 {
            let a = &self.mid[self.mid_index(point).unwrap()].1;
            let mut row = vec![f.zero(); dims[1]];
            for j in -(n as i64)..=(n as i64) {
                row[self.c01f(j)] = f.pow(a, j);
            }
            r1.push(row);
        }
        [
            Mat::from_rows(f, r0, dims[0]).expect("rows"),
            Mat::from_rows(f, r1, dims[1]).expect("rows"),
            Mat::zeros(f, 0, dims[2]),
        ]
    }

    /// Restriction of ambient functionals to a subquotient, as a chain map.
    fn functional_map(&self, rows: &[Mat; 3], src: &SubquotientComplex, target: &Complex) -> ChainMap {
        let maps = (0..3)
            .map(|k| {
                let basis = src.basis(k as i64).expect("ambient degrees");
                (k as i64, rows[k].mul(&basis.transpose()))
            })
            .collect();
        ChainMap::new(src.complex.clone(), target.clone(), maps).expect("functional is a chain map")
    }

    /// Residue `Ω^•(log D_T) → k_x[−1]` on the restricted complex `src`.
    pub fn residue_map(&self, point: usize, src: &SubquotientComplex) -> ChainMap {
        self.functional_map(&self.residue_rows(point), src, &self.skyscraper(point, 1))
    }

    /// Evaluation `Ω^•_c(log D_{T−x}) → k_x` on the restricted complex `src`.
    pub fn evaluation_map(&self, point: usize, src: &SubquotientComplex) -> ChainMap {
        self.functional_map(&self.evaluation_rows(point), src, &self.skyscraper(point, 0))
    }

    fn series_len(&self) -> usize {
        2 * (self.n + 2) + 1
    }

    /// Laurent series at `0`, exponents `−M..=M` with `M = N + 2`.
    fn mono(&self, j: i64) -> Vec<Scalar> {
        let m = (self.n + 2) as i64;
        let mut s = vec![self.field.zero(); self.series_len()];
        s[(j + m) as usize] = self.field.one();
        s
    }

    /// `1/(x − a)` expanded at `0`, for `a ≠ 0`.
    fn pole(&self, a: &Scalar) -> Vec<Scalar> {
        let f = self.field;
        let m = (self.n + 2) as i64;
        let mut s = vec![f.zero(); self.series_len()];
        let inv = f.inv(a);
        for k in 0..=m {
            s[(k + m) as usize] = f.neg(&f.pow(&inv, k + 1));
        }
        s
    }

    fn residue_of_product(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        let f = self.field;
        let m = (self.n + 2) as i64;
        let mut acc = f.zero();
        for k in -m..=m {
            let other = -1 - k;
            if other < -m || other > m {
                continue;
            }
            let (x, y) = (&a[(k + m) as usize], &b[(other + m) as usize]);
            if !f.is_zero(x) && !f.is_zero(y) {
                acc = f.add(&acc, &f.mul(x, y));
            }
        }
        acc
    }

    fn add_series(&self, a: &[Scalar], b: &[Scalar], scale: &Scalar) -> Vec<Scalar> {
        a.iter().zip(b).map(|(x, y)| self.field.add(x, &self.field.mul(scale, y))).collect()
    }

    /// Series on `U01` of the ambient basis vectors of `A^1` that are
    /// 1-forms on `U0`.
    fn series_w0(&self) -> Vec<(usize, Vec<Scalar>)> {
        let f = self.field;
        let mut out: Vec<(usize, Vec<Scalar>)> = (0..self.n).map(|j| (self.w0(j), self.mono(j as i64))).collect();
        for (t, (_, a)) in self.aff.iter().enumerate() {
            let s = if f.is_zero(a) { self.mono(-1) } else { self.pole(a) };
            out.push((self.w0pole(t), s));
        }
        out
    }

    fn series_w1(&self) -> Vec<(usize, Vec<Scalar>)> {
        let f = self.field;
        let minus = f.from_i64(-1);
        let mut out: Vec<(usize, Vec<Scalar>)> =
            (0..self.n).map(|i| (self.w1(i), self.mono(-(i as i64) - 2).iter().map(|x| f.neg(x)).collect())).collect();
        for (t, (idx, _)) in self.ypts.iter().enumerate() {
            let base: Vec<Scalar> = self.mono(-1).iter().map(|x| f.neg(x)).collect();
            let s = match self.mid_index(*idx) {
                Some(m) => self.add_series(&base, &self.pole(&self.mid[m].1), &f.one()),
                None => base,
            };
            out.push((self.w1pole(t), s));
        }
        let _ = minus;
        out
    }

    fn series_c01w(&self) -> Vec<(usize, Vec<Scalar>)> {
        let n = self.n as i64;
        let mut out: Vec<(usize, Vec<Scalar>)> = (-n - 1..n).map(|j| (self.c01w(j), self.mono(j))).collect();
        for (t, (_, a)) in self.mid.iter().enumerate() {
            out.push((self.c01pole(t), self.pole(a)));
        }
        out
    }

    /// Wedge-then-trace pairing on the ambient model, as the bilinear form
    /// on `A^i × A^{2−i}`; the trace is the residue at `0` of the Čech
    /// 1-cocycle, and products of Čech cochains are Alexander–Whitney with
    /// the sign `(−1)^{q p'}`.
    pub fn pairing_form(&self, i: i64) -> Mat {
        let f = self.field;
        let n = self.n as i64;
        let dims = self.dims();
        match i {
            0 => {
                let mut m = Mat::zeros(f, dims[0], dims[2]);
                for j in 0..=n {
                    let a = self.mono(j);
                    for (col, b) in self.series_c01w() {
                        m.set(self.f0(j as usize), col, self.residue_of_product(&a, &b));
                    }
                }
                m
            }
            1 => {
                let mut m = Mat::zeros(f, dims[1], dims[1]);
                for j in -n..=n {
                    let a = self.mono(j);
                    for (col, b) in self.series_w1() {
                        m.set(self.c01f(j), col, f.neg(&self.residue_of_product(&a, &b)));
                    }
                }
                for (row, a) in self.series_w0() {
                    for j in -n..=n {
                        m.set(row, self.c01f(j), self.residue_of_product(&a, &self.mono(j)));
                    }
                }
                m
            }
            2 => {
                let mut m = Mat::zeros(f, dims[2], dims[0]);
                for (row, a) in self.series_c01w() {
                    for i in 0..=n {
                        m.set(row, self.f1(i as usize), self.residue_of_product(&a, &self.mono(-i)));
                    }
                }
                m
            }
            _ => Mat::zeros(f, self.ambient.dim(i), self.ambient.dim(2 - i)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(field: Field, pts: &[Option<i64>]) -> CechModel {
        CechModel::new(&P1Arrangement::from_ints(field, pts).unwrap())
    }

    fn restricted(m: &CechModel, sub: &Subcomplex) -> Complex {
        m.ambient().restrict(sub).unwrap().complex
    }

    #[test]
    fn log_cohomology_matches_line_bundles() {
        for field in [Field::Rationals, Field::Prime(5)] {
            let m = line(field, &[]);
            assert_eq!(restricted(&m, &m.log_sub(0)).cohomology_profile(), [(0, 1), (2, 1)].into());
            let m = line(field, &[Some(0), Some(1), None]);
            assert_eq!(restricted(&m, &m.log_sub(0b111)).cohomology_profile(), [(0, 1), (1, 2)].into());
            assert_eq!(restricted(&m, &m.log_sub(0b001)).cohomology_profile(), [(0, 1)].into());
        }
    }

    #[test]
    fn compact_cohomology() {
        let m = line(Field::Rationals, &[Some(2), Some(0), None, Some(-1)]);
        assert_eq!(restricted(&m, &m.compact_sub(0)).cohomology_profile(), [(0, 1), (2, 1)].into());
        assert_eq!(restricted(&m, &m.compact_sub(0b0001)).cohomology_profile(), [(2, 1)].into());
        assert_eq!(restricted(&m, &m.compact_sub(0b1111)).cohomology_profile(), [(1, 3), (2, 1)].into());
    }

    #[test]
    fn pole_free_part_is_de_rham() {
        let m = line(Field::Prime(3), &[Some(1), Some(2)]);
        assert_eq!(restricted(&m, &m.pole_free_sub()).cohomology_profile(), [(0, 1), (2, 1)].into());
        assert!(m.log_sub(0b11).contains(&m.pole_free_sub()));
        assert!(m.log_sub(0b11).contains(&m.compact_sub(0b11)));
    }
}
