//! Finite abelian groups, their duals and characters, the unitary Fourier
//! transform, and Cayley-table finite groups with subgroups, annihilators,
//! and coset transversals.
//!
//! Conventions, fixed once for the whole crate:
//! * Haar measure on a finite group is counting measure; each atom of the
//!   dual carries mass `1/|G|`, which makes the Fourier transform below a
//!   unitary `l2(G) -> L2(Ghat, 1/|G|)`.
//! * Elements of a product `Z_{n1} x ... x Z_{nk}` are indexed in mixed
//!   radix with the last factor fastest.
//! * Coset representatives are always the smallest element index in the
//!   canonical enumeration.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::space::MeasureSpace;

/// A finite abelian group, stored as a product of cyclic factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    order: usize,
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("at least one cyclic factor required".into()));
        }
        if factors.iter().any(|&n| n == 0) {
            return Err(Error::InvalidInput("cyclic factors must be >= 1".into()));
        }
        let order = factors.iter().try_fold(1usize, |acc, &n| {
            acc.checked_mul(n as usize)
                .filter(|&o| o <= 1 << 24)
                .ok_or_else(|| Error::InvalidInput("group order too large".into()))
        })?;
        Ok(Self { factors, order })
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n]).expect("cyclic order >= 1")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Mixed-radix digits of the element with the given index.
    pub fn element(&self, index: usize) -> Vec<u64> {
        assert!(index < self.order, "element index out of range");
        let mut digits = vec![0u64; self.factors.len()];
        let mut rem = index;
        for j in (0..self.factors.len()).rev() {
            digits[j] = (rem % self.factors[j] as usize) as u64;
            rem /= self.factors[j] as usize;
        }
        digits
    }

    pub fn index_of(&self, tuple: &[u64]) -> Result<usize> {
        if tuple.len() != self.factors.len() {
            return Err(Error::InvalidElement(format!(
                "tuple length {} does not match {} factors",
                tuple.len(),
                self.factors.len()
            )));
        }
        let mut idx = 0usize;
        for (j, (&t, &n)) in tuple.iter().zip(&self.factors).enumerate() {
            if t >= n {
                return Err(Error::InvalidElement(format!(
                    "component {j} is {t}, outside Z_{n}"
                )));
            }
            idx = idx * n as usize + t as usize;
        }
        Ok(idx)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (ta, tb) = (self.element(a), self.element(b));
        let sum: Vec<u64> = ta
            .iter()
            .zip(&tb)
            .zip(&self.factors)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        self.index_of(&sum).expect("componentwise sum stays in range")
    }

    pub fn neg(&self, a: usize) -> usize {
        let t = self.element(a);
        let inv: Vec<u64> = t
            .iter()
            .zip(&self.factors)
            .map(|(&x, &n)| (n - x) % n)
            .collect();
        self.index_of(&inv).expect("componentwise negation stays in range")
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// The value of the character labeled by the dual element `a` at the
    /// group element `x`: `prod_j exp(2 pi i a_j x_j / n_j)`.
    pub fn character(&self, a: usize, x: usize) -> Complex64 {
        self.check_index(a).expect("dual index in range");
        self.check_index(x).expect("element index in range");
        let (ta, tx) = (self.element(a), self.element(x));
        // accumulate the exact rational phase a_j x_j / n_j mod 1
        let lcm = self.factors.iter().fold(1u64, |acc, &n| lcm(acc, n));
        let mut num: u64 = 0;
        for ((&aj, &xj), &nj) in ta.iter().zip(&tx).zip(&self.factors) {
            num = (num + (aj as u128 * xj as u128 % nj as u128) as u64 * (lcm / nj)) % lcm;
        }
        Complex64::from_polar(1.0, TAU * num as f64 / lcm as f64)
    }

    /// Fallible character evaluation for untrusted indices.
    pub fn character_value(&self, a: usize, x: usize) -> Result<Complex64> {
        self.check_index(a)?;
        self.check_index(x)?;
        Ok(self.character(a, x))
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.order {
            return Err(Error::InvalidElement(format!(
                "index {i} out of range for a group of order {}",
                self.order
            )));
        }
        Ok(())
    }

    /// Whether the character `a` is trivial on every element of `elems`.
    /// Exact integer arithmetic: no roundoff can flip the answer.
    pub fn character_trivial_on(&self, a: usize, elems: &[usize]) -> bool {
        let lcm = self.factors.iter().fold(1u64, |acc, &n| lcm(acc, n));
        let ta = self.element(a);
        elems.iter().all(|&x| {
            let tx = self.element(x);
            let mut num: u64 = 0;
            for ((&aj, &xj), &nj) in ta.iter().zip(&tx).zip(&self.factors) {
                num = (num + (aj as u128 * xj as u128 % nj as u128) as u64 * (lcm / nj)) % lcm;
            }
            num == 0
        })
    }

    /// Fourier transform with counting measure on G:
    /// `fhat(a) = sum_x f(x) conj(chi_a(x))`.
    pub fn fourier(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != self.order {
            return Err(Error::InvalidInput(format!(
                "function has length {}, group order is {}",
                f.len(),
                self.order
            )));
        }
        Ok((0..self.order)
            .map(|a| {
                (0..self.order)
                    .map(|x| f[x] * self.character(a, x).conj())
                    .sum()
            })
            .collect())
    }

    /// Inverse of [`fourier`](Self::fourier): `f(x) = (1/|G|) sum_a fhat(a) chi_a(x)`.
    pub fn inverse_fourier(&self, fhat: &[Complex64]) -> Result<Vec<Complex64>> {
        if fhat.len() != self.order {
            return Err(Error::InvalidInput(format!(
                "function has length {}, dual order is {}",
                fhat.len(),
                self.order
            )));
        }
        let scale = 1.0 / self.order as f64;
        Ok((0..self.order)
            .map(|x| {
                (0..self.order)
                    .map(|a| fhat[a] * self.character(a, x))
                    .sum::<Complex64>()
                    * scale
            })
            .collect())
    }

    /// The dual group with its Plancherel-normalized atom mass.
    pub fn dual(&self) -> DualData {
        DualData {
            group: self.clone(),
            haar_mass: 1.0 / self.order as f64,
        }
    }

    /// The dual group as a discrete measure space, one atom per character.
    pub fn dual_space(&self) -> MeasureSpace {
        let mass = 1.0 / self.order as f64;
        let atoms: Vec<String> = (0..self.order)
            .map(|a| format_tuple(&self.element(a)))
            .collect();
        MeasureSpace::new(atoms, vec![mass; self.order]).expect("valid dual space")
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        if elems.is_empty() || elems.iter().any(|&x| x >= self.order) {
            return false;
        }
        let set: std::collections::BTreeSet<usize> = elems.iter().cloned().collect();
        if !set.contains(&0) {
            return false;
        }
        set.iter()
            .all(|&x| set.contains(&self.neg(x)) && set.iter().all(|&y| set.contains(&self.add(x, y))))
    }

    /// Annihilator `G* = { a in dual : chi_a(x) = 1 for all x in sub }`.
    pub fn annihilator(&self, sub: &[usize]) -> Result<Vec<usize>> {
        if !self.is_subgroup(sub) {
            return Err(Error::InvalidSubgroup(
                "annihilator requires a subgroup (closed, with identity and inverses)".into(),
            ));
        }
        Ok((0..self.order)
            .filter(|&a| self.character_trivial_on(a, sub))
            .collect())
    }

    /// A transversal of `dual / gstar` under the smallest-index rule:
    /// one representative per coset, the product map being a bijection.
    pub fn dual_section(&self, gstar: &[usize]) -> Result<Vec<usize>> {
        if !self.is_subgroup(gstar) {
            return Err(Error::InvalidSubgroup("section requires a subgroup of the dual".into()));
        }
        let mut seen = vec![false; self.order];
        let mut reps = Vec::new();
        for a in 0..self.order {
            if !seen[a] {
                reps.push(a);
                for &g in gstar {
                    seen[self.add(a, g)] = true;
                }
            }
        }
        Ok(reps)
    }

    /// Subgroup generated by the given elements.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = std::collections::BTreeSet::new();
        set.insert(0usize);
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.add(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// The same group as a Cayley table.
    pub fn to_table(&self) -> FiniteGroupTable {
        FiniteGroupTable::from_op(self.order, |a, b| self.add(a, b))
            .expect("abelian group tables are valid")
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn format_tuple(t: &[u64]) -> String {
    let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    parts.join(",")
}

/// The dual group together with its per-atom Haar mass (`1/|G|` by default,
/// so that total dual mass times `|G|` equals `|G|`, the Plancherel scaling).
#[derive(Debug, Clone)]
pub struct DualData {
    pub group: FiniteAbelianGroup,
    pub haar_mass: f64,
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    order: usize,
    cayley: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    identity: usize,
}

impl FiniteGroupTable {
    /// Validate a multiplication table: rows and columns must be
    /// permutations, the operation associative, and every element must have
    /// an inverse.
    pub fn new(cayley: Vec<Vec<usize>>) -> Result<Self> {
        let order = cayley.len();
        if order == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        for (i, row) in cayley.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidTable(format!("row {i} has length {}", row.len())));
            }
            let mut seen = vec![false; order];
            for &v in row {
                if v >= order || seen[v] {
                    return Err(Error::InvalidTable(format!("row {i} is not a permutation")));
                }
                seen[v] = true;
            }
        }
        for j in 0..order {
            let mut seen = vec![false; order];
            for row in &cayley {
                let v = row[j];
                if seen[v] {
                    return Err(Error::InvalidTable(format!("column {j} is not a permutation")));
                }
                seen[v] = true;
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]] {
                        return Err(Error::InvalidTable(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| cayley[e][g] == g && cayley[g][e] == g))
            .ok_or_else(|| Error::InvalidTable("no identity element".into()))?;
        let mut inverses = vec![usize::MAX; order];
        for g in 0..order {
            let inv = (0..order)
                .find(|&h| cayley[g][h] == identity && cayley[h][g] == identity)
                .ok_or_else(|| Error::InvalidTable(format!("element {g} has no inverse")))?;
            inverses[g] = inv;
        }
        Ok(Self {
            order,
            cayley,
            inverses,
            identity,
        })
    }

    pub fn from_op(order: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let cayley = (0..order)
            .map(|a| (0..order).map(|b| op(a, b)).collect())
            .collect();
        Self::new(cayley)
    }

    /// Cyclic group of order `n` as a table.
    pub fn cyclic(n: usize) -> Self {
        Self::from_op(n, |a, b| (a + b) % n).expect("cyclic tables are valid")
    }

    /// Dihedral group of order `2n`: elements `0..n` are rotations
    /// `r^i`, elements `n..2n` are reflections `s r^i`, with `s r s = r^-1`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        Self::from_op(2 * n, |a, b| {
            let (i, s1) = (a % n, a >= n);
            let (j, s2) = (b % n, b >= n);
            // (s^e1 r^i)(s^e2 r^j) = s^(e1+e2) r^(±i + j)
            let k = if s2 { (n - i % n) % n + j } else { i + j } % n;
            let flip = s1 ^ s2;
            k + if flip { n } else { 0 }
        })
        .expect("dihedral tables are valid")
    }

    /// Symmetric group S_n for small n, elements enumerated as
    /// permutations of `0..n` in lexicographic order; the product `p * q`
    /// is the composition `p after q`.
    pub fn symmetric(n: usize) -> Self {
        assert!((1..=6).contains(&n), "symmetric tables supported for n <= 6");
        let perms = permutations(n);
        let lookup: std::collections::HashMap<Vec<usize>, usize> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Self::from_op(perms.len(), |a, b| {
            let comp: Vec<usize> = (0..n).map(|x| perms[a][perms[b][x]]).collect();
            lookup[&comp]
        })
        .expect("symmetric tables are valid")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.cayley[a][b] == self.cayley[b][a]))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// A witness that a subgroup of a Cayley-table group is abelian: an explicit
/// isomorphism from a product-of-cyclics model onto the subgroup elements.
#[derive(Debug, Clone)]
pub struct AbelianWitness {
    pub model: FiniteAbelianGroup,
    /// `map[i]` is the parent element corresponding to model element `i`.
    pub map: Vec<usize>,
}

/// A subgroup of a Cayley-table group, optionally with an abelian witness.
#[derive(Debug, Clone)]
pub struct SubgroupEmbedding {
    parent: FiniteGroupTable,
    elements: Vec<usize>,
    iso: Option<AbelianWitness>,
}

impl SubgroupEmbedding {
    pub fn new(parent: FiniteGroupTable, elements: Vec<usize>) -> Result<Self> {
        let mut elems = elements;
        elems.sort_unstable();
        elems.dedup();
        let set: std::collections::BTreeSet<usize> = elems.iter().cloned().collect();
        if elems.iter().any(|&x| x >= parent.order()) {
            return Err(Error::InvalidSubgroup("element index out of range".into()));
        }
        if !set.contains(&parent.identity()) {
            return Err(Error::InvalidSubgroup("missing identity".into()));
        }
        for &x in &elems {
            if !set.contains(&parent.inv(x)) {
                return Err(Error::InvalidSubgroup(format!("missing inverse of {x}")));
            }
            for &y in &elems {
                if !set.contains(&parent.mul(x, y)) {
                    return Err(Error::InvalidSubgroup(format!("not closed: {x} * {y}")));
                }
            }
        }
        Ok(Self {
            parent,
            elements: elems,
            iso: None,
        })
    }

    /// Attach an abelian witness: `map` must be a bijective homomorphism
    /// from the model onto the subgroup elements. Checked.
    pub fn with_witness(
        parent: FiniteGroupTable,
        model: FiniteAbelianGroup,
        map: Vec<usize>,
    ) -> Result<Self> {
        if map.len() != model.order() {
            return Err(Error::InvalidSubgroup(format!(
                "witness map has {} entries for a model of order {}",
                map.len(),
                model.order()
            )));
        }
        let mut sorted = map.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != map.len() {
            return Err(Error::InvalidSubgroup("witness map is not injective".into()));
        }
        for a in 0..model.order() {
            for b in 0..model.order() {
                if parent.mul(map[a], map[b]) != map[model.add(a, b)] {
                    return Err(Error::InvalidSubgroup(format!(
                        "witness is not a homomorphism at ({a}, {b})"
                    )));
                }
            }
        }
        let mut sub = Self::new(parent, map.clone())?;
        sub.iso = Some(AbelianWitness { model, map });
        Ok(sub)
    }

    /// Cyclic subgroup generated by one element, with the obvious witness.
    pub fn cyclic_witness(parent: FiniteGroupTable, generator: usize) -> Result<Self> {
        if generator >= parent.order() {
            return Err(Error::InvalidSubgroup("generator index out of range".into()));
        }
        let mut map = vec![parent.identity()];
        let mut g = generator;
        while g != parent.identity() {
            map.push(g);
            g = parent.mul(g, generator);
        }
        let model = FiniteAbelianGroup::cyclic(map.len() as u64);
        Self::with_witness(parent, model, map)
    }

    /// Witness from one generator per cyclic factor of the model:
    /// model element `(a_1, ..., a_k)` maps to `prod_j gens[j]^(a_j)`.
    pub fn abelian_witness(
        parent: FiniteGroupTable,
        model: FiniteAbelianGroup,
        gens: &[usize],
    ) -> Result<Self> {
        if gens.len() != model.factors().len() {
            return Err(Error::InvalidSubgroup(
                "one generator required per cyclic factor".into(),
            ));
        }
        let map: Vec<usize> = (0..model.order())
            .map(|i| {
                let tuple = model.element(i);
                let mut acc = parent.identity();
                for (&a, &g) in tuple.iter().zip(gens) {
                    for _ in 0..a {
                        acc = parent.mul(acc, g);
                    }
                }
                acc
            })
            .collect();
        Self::with_witness(parent, model, map)
    }

    pub fn parent(&self) -> &FiniteGroupTable {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn witness(&self) -> Option<&AbelianWitness> {
        self.iso.as_ref()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Index `[parent : subgroup]`.
    pub fn index(&self) -> usize {
        self.parent.order() / self.elements.len()
    }
}

/// A full set of right-coset representatives: the map `(x, y) -> x * y`
/// from `subgroup x reps` to the parent is a bijection (checked).
#[derive(Debug, Clone)]
pub struct CosetTransversal {
    reps: Vec<usize>,
}

impl CosetTransversal {
    pub fn new(sub: &SubgroupEmbedding, reps: Vec<usize>) -> Result<Self> {
        let parent = sub.parent();
        let mut hit = vec![false; parent.order()];
        let mut count = 0usize;
        for &y in &reps {
            if y >= parent.order() {
                return Err(Error::InvalidInput("representative out of range".into()));
            }
            for &x in sub.elements() {
                let z = parent.mul(x, y);
                if hit[z] {
                    return Err(Error::InvalidInput(format!(
                        "coset map is not injective at ({x}, {y})"
                    )));
                }
                hit[z] = true;
                count += 1;
            }
        }
        if count != parent.order() {
            return Err(Error::InvalidInput(format!(
                "coset map covers {count} of {} elements",
                parent.order()
            )));
        }
        Ok(Self { reps })
    }

    /// Smallest-index representative per right coset `G y`.
    pub fn canonical(sub: &SubgroupEmbedding) -> Self {
        let parent = sub.parent();
        let mut seen = vec![false; parent.order()];
        let mut reps = Vec::with_capacity(sub.index());
        for y in 0..parent.order() {
            if !seen[y] {
                reps.push(y);
                for &x in sub.elements() {
                    seen[parent.mul(x, y)] = true;
                }
            }
        }
        Self { reps }
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} vs {b}");
    }

    #[test]
    fn character_values() {
        let z4 = FiniteAbelianGroup::cyclic(4);
        assert_close(z4.character(1, 2), Complex64::new(-1.0, 0.0), 1e-14);
        for x in 0..4 {
            assert_close(z4.character(0, x), Complex64::new(1.0, 0.0), 0.0);
        }
        let g = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
        let a = g.index_of(&[1, 1]).unwrap();
        let x = g.index_of(&[1, 2]).unwrap();
        // direct evaluation of the product formula
        let expect = Complex64::from_polar(1.0, TAU * (0.5 + 2.0 / 3.0));
        assert_close(g.character(a, x), expect, 1e-14);
    }

    #[test]
    fn characters_are_multiplicative() {
        for g in [
            FiniteAbelianGroup::cyclic(5),
            FiniteAbelianGroup::new(vec![2, 3]).unwrap(),
            FiniteAbelianGroup::new(vec![4, 2]).unwrap(),
        ] {
            for a in 0..g.order() {
                for x in 0..g.order() {
                    for y in 0..g.order() {
                        let lhs = g.character(a, g.add(x, y));
                        let rhs = g.character(a, x) * g.character(a, y);
                        assert_close(lhs, rhs, 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn character_rejects_bad_index() {
        let z4 = FiniteAbelianGroup::cyclic(4);
        assert!(z4.character_value(4, 0).is_err());
        assert!(z4.character_value(0, 7).is_err());
    }

    #[test]
    fn fourier_of_delta_is_flat() {
        let g = FiniteAbelianGroup::cyclic(6);
        let mut f = vec![Complex64::new(0.0, 0.0); 6];
        f[0] = Complex64::new(1.0, 0.0);
        for v in g.fourier(&f).unwrap() {
            assert_close(v, Complex64::new(1.0, 0.0), 1e-14);
        }
    }

    #[test]
    fn fourier_indicator_of_subgroup() {
        // indicator of Z_2 x {0} inside Z_2 x Z_2
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let i0 = g.index_of(&[0, 0]).unwrap();
        let i1 = g.index_of(&[1, 0]).unwrap();
        let mut f = vec![Complex64::new(0.0, 0.0); 4];
        f[i0] = Complex64::new(1.0, 0.0);
        f[i1] = Complex64::new(1.0, 0.0);
        let fhat = g.fourier(&f).unwrap();
        // oracle: direct 4-point DFT
        for a in 0..4 {
            let ta = g.element(a);
            let expect = if ta[0] == 0 { 2.0 } else { 0.0 };
            assert_close(fhat[a], Complex64::new(expect, 0.0), 1e-13);
        }
    }

    #[test]
    fn plancherel_and_inversion() {
        let g = FiniteAbelianGroup::new(vec![3, 4]).unwrap();
        let mut seed = 42u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((seed >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        let f: Vec<Complex64> = (0..12).map(|_| Complex64::new(next(), next())).collect();
        let fhat = g.fourier(&f).unwrap();
        let norm_f: f64 = f.iter().map(|z| z.norm_sqr()).sum();
        let norm_fhat: f64 = fhat.iter().map(|z| z.norm_sqr()).sum::<f64>() / 12.0;
        assert!((norm_f - norm_fhat).abs() < 1e-10);
        let back = g.inverse_fourier(&fhat).unwrap();
        for (a, b) in f.iter().zip(&back) {
            assert_close(*a, *b, 1e-12);
        }
    }

    #[test]
    fn annihilator_examples() {
        let z4 = FiniteAbelianGroup::cyclic(4);
        assert_eq!(z4.annihilator(&[0, 2]).unwrap(), vec![0, 2]);
        assert_eq!(z4.annihilator(&[0, 1, 2, 3]).unwrap(), vec![0]);
        assert_eq!(z4.annihilator(&[0]).unwrap(), vec![0, 1, 2, 3]);
        assert!(z4.annihilator(&[0, 1, 2]).is_err());
    }

    #[test]
    fn annihilator_order_identity() {
        // |G*| * |G| = |ambient| over subgroups of every abelian group of order <= 24
        let mut groups = Vec::new();
        for order in 1..=24u64 {
            groups.extend(abelian_types(order));
        }
        for g in groups {
            let mut subs: Vec<Vec<usize>> = vec![];
            for x in 0..g.order() {
                subs.push(g.subgroup_generated(&[x]));
            }
            for x in 0..g.order().min(8) {
                for y in 0..g.order().min(8) {
                    subs.push(g.subgroup_generated(&[x, y]));
                }
            }
            subs.sort();
            subs.dedup();
            for sub in subs {
                let ann = g.annihilator(&sub).unwrap();
                assert_eq!(ann.len() * sub.len(), g.order(), "group {:?}", g.factors());
                assert!(g.is_subgroup(&ann));
            }
        }
    }

    fn abelian_types(order: u64) -> Vec<FiniteAbelianGroup> {
        // all factorizations into cyclic factors >= 2 (plus the trivial group),
        // enough to cover every abelian isomorphism type
        fn rec(n: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if n == 1 {
                out.push(if cur.is_empty() { vec![1] } else { cur.clone() });
                return;
            }
            let mut d = 2;
            while d <= max.min(n) {
                if n % d == 0 {
                    cur.push(d);
                    rec(n / d, d, cur, out);
                    cur.pop();
                }
                d += 1;
            }
        }
        let mut factored = Vec::new();
        rec(order, order, &mut Vec::new(), &mut factored);
        factored
            .into_iter()
            .map(|f| FiniteAbelianGroup::new(f).unwrap())
            .collect()
    }

    #[test]
    fn dual_section_examples() {
        let z4 = FiniteAbelianGroup::cyclic(4);
        assert_eq!(z4.dual_section(&[0, 2]).unwrap(), vec![0, 1]);
        assert_eq!(z4.dual_section(&[0]).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(z4.dual_section(&[0, 1, 2, 3]).unwrap(), vec![0]);
    }

    #[test]
    fn corrupted_cayley_table_rejected() {
        let mut table = FiniteGroupTable::cyclic(4).cayley().to_vec();
        // swap two entries in one row: breaks the permutation property
        table[1].swap(0, 1);
        assert!(FiniteGroupTable::new(table).is_err());
        // swap entries across rows keeping rows permutations: breaks associativity
        let mut t2 = FiniteGroupTable::cyclic(4).cayley().to_vec();
        t2[1] = vec![1, 0, 3, 2];
        assert!(FiniteGroupTable::new(t2).is_err());
    }

    #[test]
    fn symmetric_and_dihedral_tables() {
        let s3 = FiniteGroupTable::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let d4 = FiniteGroupTable::dihedral(4);
        assert_eq!(d4.order(), 8);
        assert!(!d4.is_abelian());
        // rotations form a cyclic subgroup of order 4
        let rot = SubgroupEmbedding::cyclic_witness(d4, 1).unwrap();
        assert_eq!(rot.order(), 4);
    }

    #[test]
    fn a3_inside_s3() {
        let s3 = FiniteGroupTable::symmetric(3);
        // find a 3-cycle: an element of order 3
        let gen = (0..6)
            .find(|&g| {
                let sq = s3.mul(g, g);
                g != s3.identity() && sq != s3.identity() && s3.mul(sq, g) == s3.identity()
            })
            .unwrap();
        let a3 = SubgroupEmbedding::cyclic_witness(s3.clone(), gen).unwrap();
        assert_eq!(a3.order(), 3);
        assert_eq!(a3.index(), 2);
        let t = CosetTransversal::canonical(&a3);
        assert_eq!(t.len(), 2);
        CosetTransversal::new(&a3, t.reps().to_vec()).unwrap();
    }

    #[test]
    fn witness_must_be_homomorphism() {
        let z6 = FiniteGroupTable::cyclic(6);
        // map Z_2 -> {0, 2}: 2 has order 3, not a homomorphic image of Z_2
        let model = FiniteAbelianGroup::cyclic(2);
        assert!(SubgroupEmbedding::with_witness(z6.clone(), model, vec![0, 2]).is_err());
        let model3 = FiniteAbelianGroup::cyclic(3);
        assert!(SubgroupEmbedding::with_witness(z6, model3, vec![0, 2, 4]).is_ok());
    }
}
