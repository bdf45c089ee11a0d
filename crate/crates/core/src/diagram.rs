//! Walled Brauer diagrams on `r + t` columns.
//!
//! A diagram is a perfect matching of the `2(r+t)` vertices of two rows. Each
//! row holds `r` unbarred columns to the left of the wall and `t` barred
//! columns to the right. Vertical edges join the rows on one side of the wall;
//! horizontal edges (caps on top, cups on the bottom) join an unbarred vertex
//! to a barred vertex of the same row.
//!
//! Vertex ids: top unbarred `0..r`, top barred `r..r+t`, bottom unbarred
//! `N..N+r`, bottom barred `N+r..2N`, where `N = r + t`. The product `d1 ∘ d2`
//! stacks `d1` on top of `d2`, matching the right-action convention for words.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::text::Cursor;

/// Largest supported `r + t`; vertex ids and bit masks must fit.
pub const MAX_COLUMNS: usize = 30;

/// One vertex, with 1-based column index inside its side of the wall.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub bottom: bool,
    pub barred: bool,
    pub index: usize,
}

impl Vertex {
    pub fn top(index: usize) -> Self {
        Vertex {
            bottom: false,
            barred: false,
            index,
        }
    }
    pub fn top_bar(index: usize) -> Self {
        Vertex {
            bottom: false,
            barred: true,
            index,
        }
    }
    pub fn bot(index: usize) -> Self {
        Vertex {
            bottom: true,
            barred: false,
            index,
        }
    }
    pub fn bot_bar(index: usize) -> Self {
        Vertex {
            bottom: true,
            barred: true,
            index,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index)?;
        if self.barred {
            write!(f, "b")?;
        }
        if self.bottom {
            write!(f, "'")?;
        }
        Ok(())
    }
}

/// Letters of the even generating set used by [`WalledDiagram::generator_word`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagramLetter {
    /// `s_i`, 1-based.
    S(usize),
    /// `s̄_j`, 1-based.
    Sb(usize),
    /// `e_1`.
    E,
}

/// Where a composite path passes: a vertex of the upper diagram's top row,
/// a middle column, or a vertex of the lower diagram's bottom row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Site {
    /// Top-row column id (`0..N`) of the upper diagram.
    Top(usize),
    /// Column id (`0..N`) of the row shared by both diagrams.
    Middle(usize),
    /// Bottom-row column id (`0..N`) of the lower diagram.
    Bottom(usize),
}

/// Result of stacking two diagrams while recording every path.
#[derive(Clone, Debug)]
pub struct Stacked {
    pub diagram: WalledDiagram,
    /// For every outer vertex id `v` of the result, the sites visited walking
    /// from `v` to its partner, both endpoints included.
    pub paths: Vec<Vec<Site>>,
}

/// A walled Brauer diagram.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WalledDiagram {
    r: u8,
    t: u8,
    partner: Vec<u8>,
}

/// The data `(d1, f, w, d2)` of the factorisation `d1^{-1} e^f w d2`.
///
/// `top_code`/`bottom_code` hold the pairs `(i_k, j_k)` of the coset words
/// `s_{f,i_f} s̄_{f,j_f} ... s_{1,i_1} s̄_{1,j_1}`, listed for `k = 1..f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub f: usize,
    pub top_code: Vec<(usize, usize)>,
    pub bottom_code: Vec<(usize, usize)>,
    /// Permutation of the `r - f` unbarred through strands.
    pub w_unbarred: Perm,
    /// Permutation of the `t - f` barred through strands.
    pub w_barred: Perm,
}

fn check_shape(r: usize, t: usize) -> Result<()> {
    if r == 0 || t == 0 || r + t > MAX_COLUMNS {
        return Err(Error::shape(
            format!("1 <= r, 1 <= t, r + t <= {MAX_COLUMNS}"),
            format!("r = {r}, t = {t}"),
        ));
    }
    Ok(())
}

impl WalledDiagram {
    pub fn identity(r: usize, t: usize) -> Result<Self> {
        check_shape(r, t)?;
        let n = r + t;
        let mut partner = vec![0u8; 2 * n];
        for c in 0..n {
            partner[c] = (n + c) as u8;
            partner[n + c] = c as u8;
        }
        Ok(WalledDiagram {
            r: r as u8,
            t: t as u8,
            partner,
        })
    }

    /// Build from a partner table, validating the walled Brauer conditions.
    pub fn from_partners(r: usize, t: usize, partner: Vec<u8>) -> Result<Self> {
        check_shape(r, t)?;
        let d = WalledDiagram {
            r: r as u8,
            t: t as u8,
            partner,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn from_edges(r: usize, t: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        check_shape(r, t)?;
        let n = r + t;
        let mut partner = vec![u8::MAX; 2 * n];
        let probe = WalledDiagram {
            r: r as u8,
            t: t as u8,
            partner: Vec::new(),
        };
        for &(a, b) in edges {
            let (ia, ib) = (probe.vertex_id(a)?, probe.vertex_id(b)?);
            for (x, y) in [(ia, ib), (ib, ia)] {
                if partner[x] != u8::MAX {
                    return Err(Error::InvalidDiagram(format!(
                        "vertex {} is used twice",
                        probe.vertex(x)
                    )));
                }
                partner[x] = y as u8;
            }
        }
        WalledDiagram::from_partners(r, t, partner)
    }

    fn validate(&self) -> Result<()> {
        let n = self.columns();
        if self.partner.len() != 2 * n {
            return Err(Error::InvalidDiagram(format!(
                "expected {} vertices, found {}",
                2 * n,
                self.partner.len()
            )));
        }
        for v in 0..2 * n {
            let p = self.partner[v] as usize;
            if p >= 2 * n {
                return Err(Error::InvalidDiagram(format!("vertex {} is unmatched", self.vertex(v))));
            }
            if p == v || self.partner[p] as usize != v {
                return Err(Error::InvalidDiagram(format!(
                    "matching is not an involution at {}",
                    self.vertex(v)
                )));
            }
            let (a, b) = (self.vertex(v), self.vertex(p));
            let ok = if a.bottom == b.bottom {
                a.barred != b.barred
            } else {
                a.barred == b.barred
            };
            if !ok {
                return Err(Error::InvalidDiagram(format!("edge {a}:{b} violates the wall")));
            }
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.r as usize
    }

    pub fn t(&self) -> usize {
        self.t as usize
    }

    pub fn columns(&self) -> usize {
        self.r() + self.t()
    }

    pub fn partners(&self) -> &[u8] {
        &self.partner
    }

    pub fn partner(&self, v: usize) -> usize {
        self.partner[v] as usize
    }

    pub fn vertex(&self, id: usize) -> Vertex {
        let n = self.columns();
        let (bottom, col) = (id >= n, id % n);
        if col < self.r() {
            Vertex {
                bottom,
                barred: false,
                index: col + 1,
            }
        } else {
            Vertex {
                bottom,
                barred: true,
                index: col - self.r() + 1,
            }
        }
    }

    pub fn vertex_id(&self, v: Vertex) -> Result<usize> {
        let limit = if v.barred { self.t() } else { self.r() };
        if v.index == 0 || v.index > limit {
            return Err(Error::Index(format!(
                "vertex {v} outside shape ({}, {})",
                self.r, self.t
            )));
        }
        let col = if v.barred { self.r() + v.index - 1 } else { v.index - 1 };
        Ok(if v.bottom { self.columns() + col } else { col })
    }

    /// Number of caps (equivalently of cups).
    pub fn num_caps(&self) -> usize {
        let n = self.columns();
        (0..self.r()).filter(|&c| (self.partner[c] as usize) < n).count()
    }

    pub fn is_identity(&self) -> bool {
        let n = self.columns();
        (0..n).all(|c| self.partner[c] as usize == n + c)
    }

    /// The diagram of `s_i` (1-based), crossing unbarred columns `i, i+1`.
    pub fn s(r: usize, t: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= r {
            return Err(Error::Index(format!("s{i} needs 1 <= i < r = {r}")));
        }
        Self::crossing(r, t, i - 1)
    }

    /// The diagram of `s̄_j` (1-based), crossing barred columns `j, j+1`.
    pub fn sb(r: usize, t: usize, j: usize) -> Result<Self> {
        if j == 0 || j >= t {
            return Err(Error::Index(format!("sb{j} needs 1 <= j < t = {t}")));
        }
        Self::crossing(r, t, r + j - 1)
    }

    fn crossing(r: usize, t: usize, col: usize) -> Result<Self> {
        let mut d = WalledDiagram::identity(r, t)?;
        let n = r + t;
        d.partner[col] = (n + col + 1) as u8;
        d.partner[n + col + 1] = col as u8;
        d.partner[col + 1] = (n + col) as u8;
        d.partner[n + col] = (col + 1) as u8;
        Ok(d)
    }

    /// The diagram of `e_{i,j}`: cap and cup between unbarred `i` and barred `j`.
    pub fn e(r: usize, t: usize, i: usize, j: usize) -> Result<Self> {
        if i == 0 || i > r || j == 0 || j > t {
            return Err(Error::Index(format!("e_{{{i},{j}}} outside shape ({r}, {t})")));
        }
        let mut d = WalledDiagram::identity(r, t)?;
        let n = r + t;
        let (a, b) = (i - 1, r + j - 1);
        d.partner[a] = b as u8;
        d.partner[b] = a as u8;
        d.partner[n + a] = (n + b) as u8;
        d.partner[n + b] = (n + a) as u8;
        Ok(d)
    }

    /// The diagram of a letter.
    pub fn letter(r: usize, t: usize, l: DiagramLetter) -> Result<Self> {
        match l {
            DiagramLetter::S(i) => Self::s(r, t, i),
            DiagramLetter::Sb(j) => Self::sb(r, t, j),
            DiagramLetter::E => Self::e(r, t, 1, 1),
        }
    }

    /// Mirror image in the horizontal axis; the diagram part of the
    /// anti-involution fixing all generators.
    pub fn flip(&self) -> Self {
        let n = self.columns();
        let swap = |v: usize| if v < n { v + n } else { v - n };
        let mut partner = vec![0u8; 2 * n];
        for v in 0..2 * n {
            partner[swap(v)] = swap(self.partner[v] as usize) as u8;
        }
        WalledDiagram {
            r: self.r,
            t: self.t,
            partner,
        }
    }

    /// Stack `self` on top of `lower`, tracing every path. Returns `None`
    /// when a closed loop forms.
    pub fn stack(&self, lower: &WalledDiagram) -> Result<Option<Stacked>> {
        if (self.r, self.t) != (lower.r, lower.t) {
            return Err(Error::shape(
                format!("({}, {})", self.r, self.t),
                format!("({}, {})", lower.r, lower.t),
            ));
        }
        let n = self.columns();
        let mut middle_seen = vec![false; n];
        let mut partner = vec![u8::MAX; 2 * n];
        let mut paths: Vec<Vec<Site>> = vec![Vec::new(); 2 * n];
        for start in 0..2 * n {
            if partner[start] != u8::MAX {
                continue;
            }
            // Vertex ids below 2n belong to the upper diagram, the others to
            // the lower diagram shifted by 2n.
            let (mut path, mut v) = if start < n {
                (vec![Site::Top(start)], self.partner[start] as usize)
            } else {
                (vec![Site::Bottom(start - n)], lower.partner[start] as usize + 2 * n)
            };
            let end = loop {
                if v < 2 * n {
                    if v < n {
                        path.push(Site::Top(v));
                        break v;
                    }
                    let col = v - n;
                    middle_seen[col] = true;
                    path.push(Site::Middle(col));
                    v = lower.partner[col] as usize + 2 * n;
                } else {
                    let lv = v - 2 * n;
                    if lv >= n {
                        path.push(Site::Bottom(lv - n));
                        break lv;
                    }
                    middle_seen[lv] = true;
                    path.push(Site::Middle(lv));
                    v = self.partner[n + lv] as usize;
                }
            };
            partner[start] = end as u8;
            partner[end] = start as u8;
            let mut rev = path.clone();
            rev.reverse();
            paths[end] = rev;
            paths[start] = path;
        }
        if middle_seen.iter().any(|s| !s) {
            return Ok(None);
        }
        Ok(Some(Stacked {
            diagram: WalledDiagram {
                r: self.r,
                t: self.t,
                partner,
            },
            paths,
        }))
    }

    /// Pad with identity strands to shape `(r, t)`. Unbarred column `i` and
    /// barred column `j` keep their indices.
    pub fn embed(&self, r: usize, t: usize) -> Result<Self> {
        if r < self.r() || t < self.t() {
            return Err(Error::shape(
                format!("a shape containing ({}, {})", self.r, self.t),
                format!("({r}, {t})"),
            ));
        }
        let mut out = WalledDiagram::identity(r, t)?;
        let (n0, n) = (self.columns(), r + t);
        let map = |v: usize| -> usize {
            let (row, col) = (v / n0, v % n0);
            let col = if col < self.r() { col } else { col - self.r() + r };
            row * n + col
        };
        for v in 0..2 * n0 {
            out.partner[map(v)] = map(self.partner[v] as usize) as u8;
        }
        Ok(out)
    }

    /// Plain composition; `None` when a loop forms.
    pub fn compose(&self, lower: &WalledDiagram) -> Result<Option<WalledDiagram>> {
        Ok(self.stack(lower)?.map(|s| s.diagram))
    }

    /// Decompose as `d1^{-1} e^f w d2`.
    pub fn factorize(&self) -> Factorization {
        let (r, t, n) = (self.r(), self.t(), self.columns());
        let caps = |offset: usize| -> Vec<(usize, usize)> {
            (0..r)
                .filter_map(|c| {
                    let p = self.partner[offset + c] as usize;
                    (p >= offset && p < offset + n && p - offset >= r).then(|| (c + 1, p - offset - r + 1))
                })
                .collect()
        };
        let top = caps(0);
        let bottom = caps(n);
        let f = top.len();
        let through = |barred: bool| -> Perm {
            let (lo, hi) = if barred { (r, n) } else { (0, r) };
            let tops: Vec<usize> = (lo..hi).filter(|&c| self.partner[c] as usize >= n).collect();
            let mut bots: Vec<usize> = tops.iter().map(|&c| self.partner[c] as usize - n).collect();
            let ranks: Vec<usize> = {
                bots.sort_unstable();
                tops.iter()
                    .map(|&c| {
                        let b = self.partner[c] as usize - n;
                        bots.binary_search(&b).expect("bottom of a through strand")
                    })
                    .collect()
            };
            Perm::from_images(ranks.iter().map(|&x| x as u8).collect()).expect("bijection")
        };
        Factorization {
            f,
            top_code: coset_code(&top, r, t),
            bottom_code: coset_code(&bottom, r, t),
            w_unbarred: through(false),
            w_barred: through(true),
        }
    }

    /// Rebuild a diagram from factorisation data.
    pub fn from_factorization(r: usize, t: usize, fz: &Factorization) -> Result<Self> {
        check_shape(r, t)?;
        let n = r + t;
        let f = fz.f;
        if fz.top_code.len() != f
            || fz.bottom_code.len() != f
            || fz.w_unbarred.degree() != r - f
            || fz.w_barred.degree() != t - f
        {
            return Err(Error::InvalidDiagram("inconsistent factorisation data".into()));
        }
        let top = coset_caps(&fz.top_code, r, t)?;
        let bottom = coset_caps(&fz.bottom_code, r, t)?;
        let mut partner = vec![u8::MAX; 2 * n];
        for (offset, caps) in [(0, &top), (n, &bottom)] {
            for &(i, j) in caps {
                let (a, b) = (offset + i - 1, offset + r + j - 1);
                partner[a] = b as u8;
                partner[b] = a as u8;
            }
        }
        for (barred, w) in [(false, &fz.w_unbarred), (true, &fz.w_barred)] {
            let (lo, hi) = if barred { (r, n) } else { (0, r) };
            let free = |offset: usize, partner: &[u8]| -> Vec<usize> {
                (lo..hi).filter(|&c| partner[offset + c] == u8::MAX).collect()
            };
            let tops = free(0, &partner);
            let bots = free(n, &partner);
            for (u, &c) in tops.iter().enumerate() {
                let b = n + bots[w.image(u)];
                partner[c] = b as u8;
                partner[b] = c as u8;
            }
        }
        WalledDiagram::from_partners(r, t, partner)
    }

    /// The word `d1^{-1} e^f w d2` in `s_i`, `s̄_j`, `e_1`. Its product is
    /// exactly this diagram with coefficient `+1`.
    pub fn generator_word(&self) -> Vec<DiagramLetter> {
        let fz = self.factorize();
        let mut word = coset_word(&fz.top_code);
        word.reverse();
        for k in 1..=fz.f {
            word.extend(e_kk_word(k));
        }
        let f = fz.f;
        word.extend(
            fz.w_unbarred
                .reduced_word()
                .into_iter()
                .map(|a| DiagramLetter::S(f + a)),
        );
        word.extend(fz.w_barred.reduced_word().into_iter().map(|a| DiagramLetter::Sb(f + a)));
        word.extend(coset_word(&fz.bottom_code));
        word
    }

    /// Every walled Brauer diagram of shape `(r, t)`, sorted.
    pub fn enumerate(r: usize, t: usize) -> Result<Vec<WalledDiagram>> {
        check_shape(r, t)?;
        let mut out = Vec::new();
        for f in 0..=r.min(t) {
            let codes = all_coset_codes(f, r, t);
            let wu = Perm::all(r - f);
            let wb = Perm::all(t - f);
            for top in &codes {
                for bottom in &codes {
                    for u in &wu {
                        for b in &wb {
                            let fz = Factorization {
                                f,
                                top_code: top.clone(),
                                bottom_code: bottom.clone(),
                                w_unbarred: u.clone(),
                                w_barred: b.clone(),
                            };
                            out.push(WalledDiagram::from_factorization(r, t, &fz)?);
                        }
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Parse `D{1:1b; 1':1b'}`; the shape is inferred from the largest indices.
    pub fn parse(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let d = parse_diagram(&mut cur, None)?;
        cur.expect_end()?;
        Ok(d)
    }

    /// Parse and require shape `(r, t)`.
    pub fn parse_shaped(s: &str, r: usize, t: usize) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let d = parse_diagram(&mut cur, Some((r, t)))?;
        cur.expect_end()?;
        Ok(d)
    }
}

/// Coset code `(i_k, j_k)` realising the given caps `(p_k, q_k)` (sorted by
/// `p`), i.e. `(k)d = p_k` and `(k̄)d = q̄_k`.
fn coset_code(caps: &[(usize, usize)], r: usize, t: usize) -> Vec<(usize, usize)> {
    // Q_k = s_{k-1,i_{k-1}} ... s_{1,i_1}; i_k = (p_k) Q_k^{-1}.
    let mut qu = Perm::identity(r);
    let mut qb = Perm::identity(t);
    let mut code = Vec::with_capacity(caps.len());
    for (k0, &(p, q)) in caps.iter().enumerate() {
        let k = k0 + 1;
        let i = qu.inverse().image(p - 1) + 1;
        let j = qb.inverse().image(q - 1) + 1;
        code.push((i, j));
        qu = cycle_up(r, k, i).then(&qu);
        qb = cycle_up(t, k, j).then(&qb);
    }
    code
}

/// Caps `(p_k, q_k)` of a coset code.
fn coset_caps(code: &[(usize, usize)], r: usize, t: usize) -> Result<Vec<(usize, usize)>> {
    let mut du = Perm::identity(r);
    let mut db = Perm::identity(t);
    for (k0, &(i, j)) in code.iter().enumerate().rev() {
        let k = k0 + 1;
        if i < k || i > r || j < k || j > t {
            return Err(Error::InvalidDiagram(format!("bad coset code {code:?}")));
        }
        du = du.then(&cycle_up(r, k, i));
        db = db.then(&cycle_up(t, k, j));
    }
    Ok((0..code.len()).map(|k| (du.image(k) + 1, db.image(k) + 1)).collect())
}

/// `s_{k,i} = s_k s_{k+1} ... s_{i-1}` for `k <= i` (1-based).
fn cycle_up(n: usize, k: usize, i: usize) -> Perm {
    (k..i).fold(Perm::identity(n), |acc, a| acc.then(&Perm::simple(n, a)))
}

/// Word of `s_{f,i_f} s̄_{f,j_f} ... s_{1,i_1} s̄_{1,j_1}`.
fn coset_word(code: &[(usize, usize)]) -> Vec<DiagramLetter> {
    let mut word = Vec::new();
    for (k0, &(i, j)) in code.iter().enumerate().rev() {
        let k = k0 + 1;
        word.extend((k..i).map(DiagramLetter::S));
        word.extend((k..j).map(DiagramLetter::Sb));
    }
    word
}

/// `e_{k,k} = (1̄,k̄)(1,k) e_1 (1,k)(1̄,k̄)`.
fn e_kk_word(k: usize) -> Vec<DiagramLetter> {
    let transposition = |mk: fn(usize) -> DiagramLetter| -> Vec<DiagramLetter> {
        // (1,k) = s_1 ... s_{k-2} s_{k-1} s_{k-2} ... s_1
        let mut w: Vec<_> = (1..k).map(mk).collect();
        w.extend((1..k.saturating_sub(1)).rev().map(mk));
        w
    };
    let tb = transposition(DiagramLetter::Sb);
    let tu = transposition(DiagramLetter::S);
    let mut w = tb.clone();
    w.extend(&tu);
    w.push(DiagramLetter::E);
    w.extend(&tu);
    w.extend(&tb);
    w
}

fn all_coset_codes(f: usize, r: usize, t: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new()];
    for k in 1..=f {
        let mut next = Vec::new();
        for code in &out {
            let lo = code.last().map_or(k, |&(i, _): &(usize, usize)| i + 1);
            for i in lo..=r {
                for j in k..=t {
                    let mut c = code.clone();
                    c.push((i, j));
                    next.push(c);
                }
            }
        }
        out = next;
    }
    out
}

fn parse_vertex(cur: &mut Cursor<'_>) -> Result<Vertex> {
    let index = cur.uint()? as usize;
    let barred = cur.peek_raw() == Some('b');
    if barred {
        cur.bump();
    }
    let bottom = cur.peek_raw() == Some('\'');
    if bottom {
        cur.bump();
    }
    Ok(Vertex { bottom, barred, index })
}

pub(crate) fn parse_diagram(cur: &mut Cursor<'_>, shape: Option<(usize, usize)>) -> Result<WalledDiagram> {
    let start = cur.pos();
    cur.expect('D')?;
    cur.expect('{')?;
    let mut edges = Vec::new();
    if !cur.eat('}') {
        loop {
            let a = parse_vertex(cur)?;
            cur.expect(':')?;
            let b = parse_vertex(cur)?;
            edges.push((a, b));
            if cur.eat('}') {
                break;
            }
            cur.expect(';')?;
        }
    }
    let max = |barred: bool| {
        edges
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .filter(|v| v.barred == barred)
            .map(|v| v.index)
            .max()
            .unwrap_or(0)
    };
    let (r, t) = (max(false), max(true));
    if let Some((er, et)) = shape {
        if (r, t) != (er, et) {
            return Err(Error::shape(format!("({er}, {et})"), format!("({r}, {t})")));
        }
    }
    WalledDiagram::from_edges(r, t, &edges).map_err(|e| match e {
        Error::Shape { .. } => e,
        other => Error::parse(start, other.to_string()),
    })
}

impl fmt::Display for WalledDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{{")?;
        let mut first = true;
        for v in 0..self.partner.len() {
            let p = self.partner[v] as usize;
            if p < v {
                continue;
            }
            if !first {
                write!(f, "; ")?;
            }
            first = false;
            write!(f, "{}:{}", self.vertex(v), self.vertex(p))?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for WalledDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word_product(r: usize, t: usize, word: &[DiagramLetter]) -> Option<WalledDiagram> {
        let mut acc = WalledDiagram::identity(r, t).unwrap();
        for &l in word {
            acc = acc.compose(&WalledDiagram::letter(r, t, l).unwrap()).unwrap()?;
        }
        Some(acc)
    }

    #[test]
    fn counts_match_factorial() {
        for (r, t, n) in [(1, 1, 2), (2, 1, 6), (2, 2, 24), (3, 2, 120), (3, 3, 720)] {
            let all = WalledDiagram::enumerate(r, t).unwrap();
            assert_eq!(all.len(), n);
            let mut dedup = all.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), n);
        }
    }

    #[test]
    fn factorisation_round_trips() {
        for (r, t) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2), (2, 3), (3, 3)] {
            for d in WalledDiagram::enumerate(r, t).unwrap() {
                let fz = d.factorize();
                assert_eq!(WalledDiagram::from_factorization(r, t, &fz).unwrap(), d);
                assert!(fz.top_code.windows(2).all(|w| w[0].0 < w[1].0));
                assert_eq!(word_product(r, t, &d.generator_word()), Some(d.clone()));
            }
        }
    }

    #[test]
    fn generator_word_of_e2() {
        use DiagramLetter::*;
        let e2 = WalledDiagram::e(2, 2, 2, 2).unwrap();
        assert_eq!(e2.generator_word(), vec![Sb(1), S(1), E, S(1), Sb(1)]);
    }

    #[test]
    fn e_squared_is_a_loop() {
        let e = WalledDiagram::e(1, 1, 1, 1).unwrap();
        assert_eq!(e.compose(&e).unwrap(), None);
    }

    #[test]
    fn text_round_trip() {
        for d in WalledDiagram::enumerate(2, 2).unwrap() {
            let s = d.to_string();
            assert_eq!(WalledDiagram::parse(&s).unwrap(), d);
        }
        let e = WalledDiagram::e(1, 1, 1, 1).unwrap();
        assert_eq!(e.to_string(), "D{1:1b; 1':1b'}");
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        // Vertical edge crossing the wall.
        assert!(WalledDiagram::parse("D{1:1b'; 1b:1'}").is_err());
        // Horizontal edge inside one side.
        assert!(WalledDiagram::parse("D{1:2; 1':2'; 1b:1b'}").is_err());
        // Missing vertex.
        assert!(WalledDiagram::parse("D{1:1'}").is_err());
        assert!(matches!(
            WalledDiagram::parse_shaped("D{1:1b; 1':1b'}", 2, 1),
            Err(Error::Shape { .. })
        ));
    }
}
