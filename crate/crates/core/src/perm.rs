use std::fmt;

use rand::Rng;

/// A permutation of `0..n`, stored by images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Panics unless `images` is a permutation of `0..len`.
    pub fn from_images(images: Vec<usize>) -> Self {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            assert!(i < images.len() && !seen[i], "not a permutation: {images:?}");
            seen[i] = true;
        }
        Perm(images)
    }

    /// Builds from 1-based cycles, e.g. `&[&[1, 2, 3, 4, 5]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Self {
        let mut img: Vec<usize> = (0..n).collect();
        for c in cycles {
            for k in 0..c.len() {
                img[c[k] - 1] = c[(k + 1) % c.len()] - 1;
            }
        }
        Self::from_images(img)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_even(&self) -> bool {
        let mut inv = 0;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                if self.0[i] > self.0[j] {
                    inv += 1;
                }
            }
        }
        inv % 2 == 0
    }

    pub fn sign(&self) -> i64 {
        if self.is_even() {
            1
        } else {
            -1
        }
    }

    /// Left action on a tuple: `(σ·z)_i = z_{σ⁻¹(i)}`, so the value in slot
    /// `i` moves to slot `σ(i)`.
    pub fn act<T: Clone>(&self, z: &[T]) -> Vec<T> {
        let mut out = z.to_vec();
        for (i, zi) in z.iter().enumerate() {
            out[self.0[i]] = zi.clone();
        }
        out
    }

    /// All permutations of `0..n` in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Perm(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }

    pub fn all_even(n: usize) -> Vec<Perm> {
        Self::all(n).into_iter().filter(Perm::is_even).collect()
    }

    pub fn random_even<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Perm {
        loop {
            let mut img: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                img.swap(i, j);
            }
            let p = Perm(img);
            if p.is_even() {
                return p;
            }
        }
    }

    /// Order of the permutation.
    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = self.compose(&p);
            k += 1;
        }
        k
    }
}

impl fmt::Display for Perm {
    /// 1-based cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = self.0[i];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counts() {
        assert_eq!(Perm::all(5).len(), 120);
        assert_eq!(Perm::all_even(5).len(), 60);
        assert_eq!(Perm::all_even(6).len(), 360);
    }

    #[test]
    fn cycle_display_and_action() {
        let c = Perm::from_cycles(5, &[&[1, 2, 3, 4, 5]]);
        assert_eq!(c.to_string(), "(1 2 3 4 5)");
        assert_eq!(c.act(&['a', 'b', 'c', 'd', 'e']), vec!['e', 'a', 'b', 'c', 'd']);
        assert_eq!(c.order(), 5);
    }

    fn perm6() -> impl Strategy<Value = Perm> {
        Just((0..6).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(Perm::from_images)
    }

    proptest! {
        #[test]
        fn action_is_left(p in perm6(), q in perm6()) {
            let z: Vec<usize> = (10..16).collect();
            prop_assert_eq!(p.act(&q.act(&z)), p.compose(&q).act(&z));
        }

        #[test]
        fn parity_is_multiplicative(p in perm6(), q in perm6()) {
            prop_assert_eq!(p.compose(&q).sign(), p.sign() * q.sign());
        }
    }
}
