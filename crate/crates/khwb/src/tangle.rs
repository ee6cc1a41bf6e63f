//! Rational tangles, 4-ended tangle templates, and their closures.
//!
//! Conventions: a tangle lives in a square with ends NW, NE, SW, SE. The
//! zero tangle is two horizontal strands, the infinity tangle two vertical
//! strands. Twist words are stored outermost-first, `[a_k, ..., a_1]`, with
//! value `a_k + 1/(a_{k-1} + 1/(... + 1/a_1))`; building applies `a_1`
//! horizontal (right-side) twists first, then alternates vertical
//! (bottom-side) and horizontal twist regions, so words always have odd
//! length and end on a horizontal region. The empty word is the infinity
//! tangle.
//!
//! Attaching a rational tangle to a template pastes it into the template's
//! NW-NE-SW-SE slot; the zero tangle realizes the numerator closure and the
//! infinity tangle the denominator closure.

use thiserror::Error;

use crate::diagram::{Crossing, Diagram, DiagramError, UnionFind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TangleError {
    #[error("slope 0/0 is not allowed")]
    ZeroZero,
    #[error("template ends must be four distinct open edges")]
    BadEnds,
    #[error("template edge {0} has degree {1}, expected {2}")]
    BadTemplateEdge(u32, usize, usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// A reduced fraction r/s with s >= 0; 1/0 is the infinity slope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    pub r: i64,
    pub s: i64,
}

impl Slope {
    pub fn new(r: i64, s: i64) -> Result<Self, TangleError> {
        if r == 0 && s == 0 {
            return Err(TangleError::ZeroZero);
        }
        let g = gcd(r.unsigned_abs(), s.unsigned_abs()) as i64;
        let (mut r, mut s) = (r / g, s / g);
        if s < 0 {
            r = -r;
            s = -s;
        }
        if s == 0 {
            r = 1;
        }
        Ok(Slope { r, s })
    }

    pub const INFINITY: Slope = Slope { r: 1, s: 0 };

    pub fn is_infinity(&self) -> bool {
        self.s == 0
    }
}

impl std::fmt::Display for Slope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.s == 1 {
            write!(f, "{}", self.r)
        } else {
            write!(f, "{}/{}", self.r, self.s)
        }
    }
}

impl std::str::FromStr for Slope {
    type Err = TangleError;
    fn from_str(t: &str) -> Result<Self, TangleError> {
        let (r, s) = match t.split_once('/') {
            Some((a, b)) => (
                a.trim().parse().map_err(|_| TangleError::ZeroZero)?,
                b.trim().parse().map_err(|_| TangleError::ZeroZero)?,
            ),
            None => (t.trim().parse().map_err(|_| TangleError::ZeroZero)?, 1),
        };
        Slope::new(r, s)
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Continued-fraction expansion of a slope, outermost coefficient first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistWord {
    pub coefficients: Vec<i64>,
}

impl TwistWord {
    /// Exact evaluation back to a slope.
    pub fn evaluate(&self) -> Slope {
        let (mut num, mut den): (i64, i64) = (1, 0);
        for &a in self.coefficients.iter().rev() {
            // x -> a + 1/x
            let (n2, d2) = (a * num + den, num);
            num = n2;
            den = d2;
        }
        Slope::new(num, den).expect("twist word evaluates to 0/0")
    }
}

/// Euclidean expansion adjusted to odd length (empty for 1/0).
pub fn continued_fraction(s: Slope) -> TwistWord {
    if s.is_infinity() {
        return TwistWord { coefficients: Vec::new() };
    }
    let mut digits = Vec::new();
    let (mut num, mut den) = (s.r, s.s);
    while den != 0 {
        let q = num.div_euclid(den);
        let rem = num - q * den;
        digits.push(q);
        num = den;
        den = rem;
    }
    if digits.len() % 2 == 0 {
        let last = *digits.last().unwrap();
        if last == 1 {
            digits.pop();
            *digits.last_mut().unwrap() += 1;
        } else {
            *digits.last_mut().unwrap() -= 1;
            digits.push(1);
        }
    }
    TwistWord { coefficients: digits }
}

/// A 4-ended tangle as PD-style data: interior crossings plus the four open
/// end edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleTemplate {
    pub crossings: Vec<[u32; 4]>,
    /// NW, NE, SW, SE end edges.
    pub ends: [u32; 4],
}

impl TangleTemplate {
    /// Every non-end edge appears exactly twice; each end edge exactly once.
    pub fn validate(&self) -> Result<(), TangleError> {
        let max = self
            .crossings
            .iter()
            .flat_map(|c| c.iter().copied())
            .chain(self.ends.iter().copied())
            .max()
            .unwrap_or(0);
        let mut deg = vec![0usize; max as usize + 1];
        for c in &self.crossings {
            for &e in c {
                deg[e as usize] += 1;
            }
        }
        let mut sorted_ends = self.ends;
        sorted_ends.sort_unstable();
        if sorted_ends.windows(2).any(|w| w[0] == w[1]) {
            // an end edge may appear as two ends only if it is a bare arc
            // (degree 0 in crossings); anything else is malformed
            for &e in &self.ends {
                if deg[e as usize] != 0 {
                    return Err(TangleError::BadEnds);
                }
            }
        }
        for e in 1..=max {
            let is_end = self.ends.contains(&e);
            let end_mult = self.ends.iter().filter(|&&x| x == e).count();
            let expected = if is_end { 2 - end_mult } else { 2 };
            if deg[e as usize] != expected && (is_end || deg[e as usize] != 0) {
                return Err(TangleError::BadTemplateEdge(e, deg[e as usize], expected));
            }
        }
        Ok(())
    }
}

const NW: usize = 0;
const NE: usize = 1;
const SW: usize = 2;
const SE: usize = 3;

/// Incremental tangle constructor with label union-find; labels are
/// compressed only on assembly.
#[derive(Clone, Debug)]
pub struct TangleBuilder {
    crossings: Vec<[u32; 4]>,
    parent: Vec<u32>,
    free_loops: u32,
    ends: [u32; 4],
    hole: Option<[u32; 4]>,
}

impl TangleBuilder {
    fn empty() -> Self {
        TangleBuilder {
            crossings: Vec::new(),
            parent: vec![0], // label 0 unused
            free_loops: 0,
            ends: [0; 4],
            hole: None,
        }
    }

    fn fresh(&mut self) -> u32 {
        let l = self.parent.len() as u32;
        self.parent.push(l);
        l
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn join(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            self.free_loops += 1;
        } else {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }

    /// Two horizontal strands.
    pub fn zero() -> Self {
        let mut t = Self::empty();
        let top = t.fresh();
        let bottom = t.fresh();
        t.ends = [top, top, bottom, bottom];
        t
    }

    /// Two vertical strands.
    pub fn infinity() -> Self {
        let mut t = Self::empty();
        let left = t.fresh();
        let right = t.fresh();
        t.ends = [left, right, left, right];
        t
    }

    /// A square hole: four open corner edges, recorded for later filling.
    pub fn hole() -> Self {
        let mut t = Self::empty();
        let ends = [t.fresh(), t.fresh(), t.fresh(), t.fresh()];
        t.ends = ends;
        t.hole = Some(ends);
        t
    }

    /// One half-twist of the NE and SE ends. With `positive`, the strand
    /// rising from SW-corner level to the new NE passes over.
    pub fn add_right_twist(&mut self, positive: bool) {
        let a = self.ends[NE];
        let b = self.ends[SE];
        let c = self.fresh(); // new NE
        let d = self.fresh(); // new SE
        // strands a->d and b->c cross; spokes UL=a, LL=b, LR=d, UR=c
        if positive {
            // b-c over, under-strand a-d: CCW from UL
            self.crossings.push([a, b, d, c]);
        } else {
            // a-d over, under-strand b-c: CCW from LL
            self.crossings.push([b, d, c, a]);
        }
        self.ends[NE] = c;
        self.ends[SE] = d;
    }

    /// One half-twist of the SW and SE ends. With `positive`, the strand
    /// from the old SE to the new SW passes over.
    pub fn add_bottom_twist(&mut self, positive: bool) {
        let a = self.ends[SW];
        let b = self.ends[SE];
        let c = self.fresh(); // new SW
        let d = self.fresh(); // new SE
        // strands a->d and b->c cross; spokes UL=a, UR=b, LL=c, LR=d
        if positive {
            // b-c over, under a-d: CCW from UL
            self.crossings.push([a, c, d, b]);
        } else {
            // a-d over, under b-c: CCW from UR
            self.crossings.push([b, a, c, d]);
        }
        self.ends[SW] = c;
        self.ends[SE] = d;
    }

    pub fn add_right_twists(&mut self, n: i64) {
        for _ in 0..n.unsigned_abs() {
            self.add_right_twist(n > 0);
        }
    }

    pub fn add_bottom_twists(&mut self, n: i64) {
        for _ in 0..n.unsigned_abs() {
            self.add_bottom_twist(n > 0);
        }
    }

    /// Horizontal sum: `self` on the left, `other` on the right, joining
    /// NE-NW and SE-SW in the middle.
    pub fn hsum(mut self, other: &TangleBuilder) -> Self {
        assert!(
            self.hole.is_none() || other.hole.is_none(),
            "at most one summand may carry a hole"
        );
        let offset = self.parent.len() as u32 - 1;
        for i in 1..other.parent.len() as u32 {
            let l = self.fresh();
            debug_assert_eq!(l, i + offset);
        }
        // replay other's unions
        for i in 1..other.parent.len() as u32 {
            if other.parent[i as usize] != i {
                self.join(i + offset, other.parent[i as usize] + offset);
            }
        }
        for c in &other.crossings {
            self.crossings.push([c[0] + offset, c[1] + offset, c[2] + offset, c[3] + offset]);
        }
        self.free_loops += other.free_loops;
        self.join(self.ends[NE], other.ends[NW] + offset);
        self.join(self.ends[SE], other.ends[SW] + offset);
        self.ends[NE] = other.ends[NE] + offset;
        self.ends[SE] = other.ends[SE] + offset;
        if let Some(h) = other.hole {
            self.hole = Some([h[0] + offset, h[1] + offset, h[2] + offset, h[3] + offset]);
        }
        self
    }

    /// Join NW-NE and SW-SE.
    pub fn close_numerator(&mut self) {
        self.join(self.ends[NW], self.ends[NE]);
        self.join(self.ends[SW], self.ends[SE]);
    }

    /// Join NW-SW and NE-SE.
    pub fn close_denominator(&mut self) {
        self.join(self.ends[NW], self.ends[SW]);
        self.join(self.ends[NE], self.ends[SE]);
    }

    /// Paste a closed-up builder into a closed diagram. All ends must have
    /// been joined (directly or through a filled hole).
    pub fn into_diagram(mut self) -> Result<Diagram, TangleError> {
        // compress labels
        let mut map = vec![0u32; self.parent.len()];
        let mut next = 0u32;
        let crossings_raw = std::mem::take(&mut self.crossings);
        let mut compressed: Vec<[u32; 4]> = Vec::with_capacity(crossings_raw.len());
        let mut occurrences = vec![0usize; self.parent.len() + 4 * crossings_raw.len()];
        for c in &crossings_raw {
            let mut t = [0u32; 4];
            for (i, &e) in c.iter().enumerate() {
                let root = self.find(e);
                if map[root as usize] == 0 {
                    next += 1;
                    map[root as usize] = next;
                }
                t[i] = map[root as usize];
                occurrences[map[root as usize] as usize] += 1;
            }
            compressed.push(t);
        }
        // labels joined into loops with no crossing occurrences were counted
        // in free_loops already; remaining degree check happens in Diagram
        let normalized = normalize_tuples(compressed)?;
        let crossings = normalized.into_iter().map(Crossing).collect();
        let d = Diagram::new(crossings, self.free_loops)?;
        Ok(d)
    }

    /// Freeze as a template whose slot is the hole.
    pub fn into_template(mut self) -> Result<TangleTemplate, TangleError> {
        let hole = self.hole.ok_or(TangleError::BadEnds)?;
        let mut map = vec![0u32; self.parent.len()];
        let mut next = 0u32;
        let crossings_raw = std::mem::take(&mut self.crossings);
        // assign hole ends first so templates have stable small end labels
        let mut ends = [0u32; 4];
        for (i, &h) in hole.iter().enumerate() {
            let root = self.find(h);
            if map[root as usize] == 0 {
                next += 1;
                map[root as usize] = next;
            }
            ends[i] = map[root as usize];
        }
        let mut compressed = Vec::with_capacity(crossings_raw.len());
        for c in &crossings_raw {
            let mut t = [0u32; 4];
            for (i, &e) in c.iter().enumerate() {
                let root = self.find(e);
                if map[root as usize] == 0 {
                    next += 1;
                    map[root as usize] = next;
                }
                t[i] = map[root as usize];
            }
            compressed.push(t);
        }
        let template = TangleTemplate { crossings: compressed, ends };
        template.validate()?;
        Ok(template)
    }
}

/// Build the rational tangle of a slope from its twist word.
pub fn rational_builder(s: Slope) -> TangleBuilder {
    let word = continued_fraction(s);
    if word.coefficients.is_empty() {
        return TangleBuilder::infinity();
    }
    let mut t = TangleBuilder::zero();
    for (pos, &a) in word.coefficients.iter().rev().enumerate() {
        if pos % 2 == 0 {
            t.add_right_twists(a);
        } else {
            t.add_bottom_twists(a);
        }
    }
    t
}

/// The rational tangle of a slope as template data.
pub fn rational_tangle(s: Slope) -> TangleTemplate {
    let mut b = rational_builder(s);
    // expose the four outer ends as a hole-less template
    let ends = b.ends;
    let mut map = vec![0u32; b.parent.len()];
    let mut next = 0u32;
    let mut resolve = |b: &mut TangleBuilder, e: u32, map: &mut Vec<u32>| {
        let root = b.find(e);
        if map[root as usize] == 0 {
            next += 1;
            map[root as usize] = next;
        }
        map[root as usize]
    };
    let mut out_ends = [0u32; 4];
    for (i, &e) in ends.iter().enumerate() {
        out_ends[i] = resolve(&mut b, e, &mut map);
    }
    let crossings_raw = b.crossings.clone();
    let mut compressed = Vec::with_capacity(crossings_raw.len());
    for c in &crossings_raw {
        let mut t = [0u32; 4];
        for (i, &e) in c.iter().enumerate() {
            t[i] = resolve(&mut b, e, &mut map);
        }
        compressed.push(t);
    }
    TangleTemplate { crossings: compressed, ends: out_ends }
}

/// Paste the rational tangle of `slope` into the template's slot and return
/// the resulting closed diagram.
pub fn attach_rational(template: &TangleTemplate, slope: Slope) -> Result<Diagram, TangleError> {
    template.validate()?;
    let filling = rational_builder(slope);
    let mut b = TangleBuilder::empty();
    // import template edges
    let t_max = template
        .crossings
        .iter()
        .flat_map(|c| c.iter().copied())
        .chain(template.ends.iter().copied())
        .max()
        .unwrap_or(0);
    for _ in 0..t_max {
        b.fresh();
    }
    for c in &template.crossings {
        b.crossings.push(*c);
    }
    // import filling with offset
    let offset = t_max;
    for i in 1..filling.parent.len() as u32 {
        let l = b.fresh();
        debug_assert_eq!(l, i + offset);
    }
    for i in 1..filling.parent.len() as u32 {
        let mut f = filling.clone();
        let root = f.find(i);
        if root != i {
            b.join(i + offset, root + offset);
        }
    }
    for c in &filling.crossings {
        b.crossings.push([c[0] + offset, c[1] + offset, c[2] + offset, c[3] + offset]);
    }
    b.free_loops += filling.free_loops;
    // match ends
    for k in 0..4 {
        b.join(template.ends[k], filling.ends[k] + offset);
    }
    b.into_diagram()
}

/// Rotate tuples by two where needed so slot 0 holds the incoming
/// under-strand, choosing component orientations deterministically.
pub fn normalize_tuples(crossings: Vec<[u32; 4]>) -> Result<Vec<[u32; 4]>, TangleError> {
    if crossings.is_empty() {
        return Ok(crossings);
    }
    let max = crossings.iter().flat_map(|c| c.iter().copied()).max().unwrap();
    // occurrences
    let mut ports: Vec<Vec<(usize, usize)>> = vec![Vec::new(); max as usize + 1];
    for (ci, c) in crossings.iter().enumerate() {
        for (s, &e) in c.iter().enumerate() {
            ports[e as usize].push((ci, s));
        }
    }
    for e in 1..=max {
        if ports[e as usize].len() != 2 {
            return Err(TangleError::BadTemplateEdge(e, ports[e as usize].len(), 2));
        }
    }
    // head[e]: port index (0/1) the edge points into
    let mut head: Vec<Option<usize>> = vec![None; max as usize + 1];
    let mut components = UnionFind::new(max as usize + 1);
    for c in &crossings {
        components.union(c[0] as usize, c[2] as usize);
        components.union(c[1] as usize, c[3] as usize);
    }
    for seed in 1..=max {
        if head[seed as usize].is_some() || components.find(seed as usize) != seed as usize {
            continue;
        }
        head[seed as usize] = Some(1);
        let mut stack = vec![seed];
        while let Some(e) = stack.pop() {
            let h = head[e as usize].unwrap();
            // the edge enters the crossing at ports[e][h] and leaves at the other
            for (role, &(ci, s)) in ports[e as usize].iter().enumerate() {
                let entering = role == h;
                let partner_slot = (s + 2) % 4;
                let pe = crossings[ci][partner_slot];
                let p_ports = &ports[pe as usize];
                let p_here = p_ports.iter().position(|&p| p == (ci, partner_slot)).unwrap();
                // strand continues: if e enters at (ci,s), partner leaves at
                // (ci, partner_slot); else partner enters there
                let p_head = if entering { 1 - p_here } else { p_here };
                match head[pe as usize] {
                    None => {
                        head[pe as usize] = Some(p_head);
                        stack.push(pe);
                    }
                    Some(x) => {
                        if x != p_head {
                            return Err(TangleError::Diagram(DiagramError::Orientation(pe)));
                        }
                    }
                }
            }
        }
    }
    let rotated = crossings
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let e0 = c[0];
            let p = ports[e0 as usize].iter().position(|&p| p == (ci, 0)).unwrap();
            if head[e0 as usize] == Some(p) {
                *c
            } else {
                [c[2], c[3], c[0], c[1]]
            }
        })
        .collect();
    Ok(rotated)
}

/// Numerator closure of a template: paste in the zero tangle.
pub fn numerator_closure(t: &TangleTemplate) -> Result<Diagram, TangleError> {
    attach_rational(t, Slope::new(0, 1).unwrap())
}

/// Denominator closure: paste in the infinity tangle.
pub fn denominator_closure(t: &TangleTemplate) -> Result<Diagram, TangleError> {
    attach_rational(t, Slope::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_normalization() {
        assert_eq!(Slope::new(6, 4).unwrap(), Slope { r: 3, s: 2 });
        assert_eq!(Slope::new(3, -2).unwrap(), Slope { r: -3, s: 2 });
        assert_eq!(Slope::new(-5, 0).unwrap(), Slope::INFINITY);
        assert!(Slope::new(0, 0).is_err());
    }

    #[test]
    fn cf_base_cases() {
        assert!(continued_fraction(Slope::INFINITY).coefficients.is_empty());
        assert_eq!(continued_fraction(Slope::new(3, 1).unwrap()).coefficients, vec![3]);
        assert_eq!(continued_fraction(Slope::new(0, 1).unwrap()).coefficients, vec![0]);
    }

    #[test]
    fn cf_roundtrip_small() {
        let w = continued_fraction(Slope::new(8, 5).unwrap());
        assert_eq!(w.evaluate(), Slope::new(8, 5).unwrap());
        assert_eq!(w.coefficients.len() % 2, 1);
    }

    #[test]
    fn cf_roundtrip_range() {
        for r in -100i64..=100 {
            for s in 0i64..=100 {
                if (r == 0 && s == 0) || gcd(r.unsigned_abs(), s.unsigned_abs()) != 1 {
                    continue;
                }
                let slope = Slope::new(r, s).unwrap();
                let w = continued_fraction(slope);
                assert_eq!(w.evaluate(), slope, "roundtrip failed for {r}/{s}");
                assert_eq!(w.coefficients.len() % 2, if slope.is_infinity() { 0 } else { 1 });
            }
        }
    }

    #[test]
    fn infinity_tangle_shape() {
        let t = rational_tangle(Slope::INFINITY);
        assert!(t.crossings.is_empty());
        assert_eq!(t.ends[NW], t.ends[SW]);
        assert_eq!(t.ends[NE], t.ends[SE]);
    }

    #[test]
    fn integer_tangle_crossing_count() {
        for n in [-4i64, -1, 0, 1, 5] {
            let t = rational_tangle(Slope::new(n, 1).unwrap());
            assert_eq!(t.crossings.len() as i64, n.abs());
        }
    }

    #[test]
    fn half_slope_is_two_vertical_twists() {
        // 1/2 builds as one horizontal then one vertical twist region of one
        // crossing each under the odd-length convention
        let t = rational_tangle(Slope::new(1, 2).unwrap());
        assert_eq!(t.crossings.len(), 2);
    }

    #[test]
    fn closures_of_simple_tangles() {
        // N(zero) = two-component unlink
        let z = rational_tangle(Slope::new(0, 1).unwrap());
        let n = numerator_closure(&z).unwrap();
        assert_eq!(n.crossing_count(), 0);
        assert_eq!(n.component_count(), 2);
        // D(zero) = unknot
        let d = denominator_closure(&z).unwrap();
        assert_eq!(d.component_count(), 1);
        // N(infinity) = unknot
        let inf = rational_tangle(Slope::INFINITY);
        let n = numerator_closure(&inf).unwrap();
        assert_eq!(n.crossing_count(), 0);
        assert_eq!(n.component_count(), 1);
    }

    #[test]
    fn twist_closures_are_torus_links() {
        // N(n/1) closes n twists into a (2,n) torus link diagram
        let t = rational_tangle(Slope::new(3, 1).unwrap());
        let n = numerator_closure(&t).unwrap();
        assert_eq!(n.crossing_count(), 3);
        assert_eq!(n.component_count(), 1);
        assert_eq!(n.writhe().unwrap().abs(), 3);
        let t2 = rational_tangle(Slope::new(2, 1).unwrap());
        let n2 = numerator_closure(&t2).unwrap();
        assert_eq!(n2.component_count(), 2);
        // D(n/1) unwinds to an unknot with kinks
        let d = denominator_closure(&t).unwrap();
        assert_eq!(d.component_count(), 1);
    }
}
