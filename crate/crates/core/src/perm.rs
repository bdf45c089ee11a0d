//! Permutations of `{0, .., n-1}` acting on the right: `(i)(uv) = ((i)u)v`.
//!
//! Public indices (cycle notation, generator names) are 1-based; the stored
//! image table is 0-based.

use std::fmt;

use crate::error::{Error, Result};
use crate::text::Cursor;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    /// Build from a 0-based image table, checking it is a bijection.
    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::Index(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// The transposition of the 0-based points `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Perm::identity(n);
        p.0.swap(a, b);
        p
    }

    /// The simple transposition `s_i = (i, i+1)`, 1-based `i`.
    pub fn simple(n: usize, i: usize) -> Self {
        Perm::transposition(n, i - 1, i)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `(i)self` for a 0-based point.
    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Right-action product: `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn inversions(&self) -> usize {
        let n = self.0.len();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.0[i] > self.0[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// A reduced word `[a_1, .., a_k]` (1-based) with `s_{a_1} ... s_{a_k} = self`.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::with_capacity(w.inversions());
        'outer: loop {
            for i in 0..w.0.len().saturating_sub(1) {
                if w.0[i] > w.0[i + 1] {
                    // s_i w has one inversion fewer and w = s_i (s_i w).
                    w.0.swap(i, i + 1);
                    word.push(i + 1);
                    continue 'outer;
                }
            }
            return word;
        }
    }

    /// All permutations of degree `n` in lexicographic order of image tables.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..n as u8).collect();
        loop {
            out.push(Perm(cur.clone()));
            // Next lexicographic permutation.
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                return out;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
    }

    /// Cycle notation with fixed points, e.g. `(1 2 3)(4)`.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Perm> {
        let mut cur = Cursor::new(s);
        let p = parse_cycles(&mut cur, n)?;
        cur.expect_end()?;
        Ok(p)
    }
}

/// Parse one or more parenthesised cycles from the cursor.
pub(crate) fn parse_cycles(cur: &mut Cursor<'_>, n: usize) -> Result<Perm> {
    let mut images: Vec<Option<u8>> = vec![None; n];
    let mut any = false;
    while cur.peek() == Some('(') {
        cur.bump();
        any = true;
        let mut cycle = Vec::new();
        while cur.peek() != Some(')') {
            let pos = cur.pos();
            let v = cur.uint()? as usize;
            if v == 0 || v > n {
                return Err(Error::parse(pos, format!("point {v} outside 1..={n}")));
            }
            cycle.push(v - 1);
        }
        cur.expect(')')?;
        for (k, &a) in cycle.iter().enumerate() {
            let b = cycle[(k + 1) % cycle.len()];
            if images[a].is_some() {
                return Err(cur.error(format!("point {} repeated", a + 1)));
            }
            images[a] = Some(b as u8);
        }
    }
    if !any {
        return Err(cur.error("expected a cycle"));
    }
    let table = images.iter().enumerate().map(|(i, x)| x.unwrap_or(i as u8)).collect();
    Perm::from_images(table).map_err(|e| cur.error(e.to_string()))
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.len();
        if n == 0 {
            return write!(f, "()");
        }
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                write!(f, "{}", i + 1)?;
                i = self.0[i] as usize;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_action_composition() {
        // s1 then s2 sends 1 -> 2 -> 3.
        let p = Perm::simple(3, 1).then(&Perm::simple(3, 2));
        assert_eq!(p.image(0), 2);
        assert_eq!(p.to_string(), "(1 3 2)");
    }

    #[test]
    fn reduced_words_multiply_back() {
        for p in Perm::all(4) {
            let word = p.reduced_word();
            assert_eq!(word.len(), p.inversions());
            let q = word
                .iter()
                .fold(Perm::identity(4), |acc, &i| acc.then(&Perm::simple(4, i)));
            assert_eq!(p, q);
        }
    }

    #[test]
    fn cycles_round_trip() {
        for p in Perm::all(4) {
            assert_eq!(Perm::parse_cycles(&p.to_string(), 4).unwrap(), p);
        }
        assert!(Perm::parse_cycles("(1 2)(2 3)", 3).is_err());
        assert!(Perm::parse_cycles("(1 5)", 3).is_err());
    }
}
