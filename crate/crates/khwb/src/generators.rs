//! Diagram family constructors: braid closures, torus knots, and the
//! branch sets arising from surgery correspondences.

use thiserror::Error;

use crate::diagram::{Diagram, DiagramError};
use crate::tangle::{gcd, normalize_tuples, TangleError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("torus knot requires 2 <= p < q, got ({0},{1})")]
    TorusRange(i64, i64),
    #[error("torus knot requires gcd(p,q) = 1, got ({0},{1})")]
    TorusGcd(i64, i64),
    #[error("seifert branch set requires odd q > 1 and n > 0, got (q={0}, n={1})")]
    SeifertRange(i64, i64),
    #[error("braid generator {0} out of range for {1} strands")]
    BraidGenerator(i32, usize),
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Close a braid word on `strands` strands. Generator `i` (1-based) twists
/// strand positions i and i+1; positive generators give positive crossings.
pub fn braid_closure(word: &[i32], strands: usize) -> Result<Diagram, GeneratorError> {
    assert!(strands >= 1);
    let mut next_edge = 0u32;
    let mut fresh = || {
        next_edge += 1;
        next_edge
    };
    let initial: Vec<u32> = (0..strands).map(|_| fresh()).collect();
    let mut cur = initial.clone();
    let mut crossings: Vec<[u32; 4]> = Vec::with_capacity(word.len());
    for &g in word {
        let i = g.unsigned_abs() as usize;
        if i == 0 || i >= strands {
            return Err(GeneratorError::BraidGenerator(g, strands));
        }
        let (a, b) = (cur[i - 1], cur[i]); // left, right incoming from above
        let left_out = fresh();
        let right_out = fresh();
        if g > 0 {
            // left strand dives under: spokes NW=a(in), NE=b(in), SW/SE out;
            // under-strand runs NW -> SE, tuple CCW from NW
            crossings.push([a, left_out, right_out, b]);
        } else {
            // right strand dives under (NE -> SW), tuple CCW from NE
            crossings.push([b, a, left_out, right_out]);
        }
        cur[i - 1] = left_out;
        cur[i] = right_out;
    }
    // close up: identify final labels with initial ones
    let mut uf: Vec<u32> = (0..=next_edge).collect();
    fn find(uf: &mut Vec<u32>, x: u32) -> u32 {
        let mut r = x;
        while uf[r as usize] != r {
            r = uf[r as usize];
        }
        let mut c = x;
        while uf[c as usize] != r {
            let n = uf[c as usize];
            uf[c as usize] = r;
            c = n;
        }
        r
    }
    let mut free_loops = 0u32;
    for (f, l) in initial.iter().zip(cur.iter()) {
        let (rf, rl) = (find(&mut uf, *f), find(&mut uf, *l));
        if rf == rl {
            free_loops += 1;
        } else {
            let (lo, hi) = if rf < rl { (rf, rl) } else { (rl, rf) };
            uf[hi as usize] = lo;
        }
    }
    let mut map = vec![0u32; next_edge as usize + 1];
    let mut compact = 0u32;
    let mut tuples = Vec::with_capacity(crossings.len());
    for c in &crossings {
        let mut t = [0u32; 4];
        for (k, &e) in c.iter().enumerate() {
            let root = find(&mut uf, e);
            if map[root as usize] == 0 {
                compact += 1;
                map[root as usize] = compact;
            }
            t[k] = map[root as usize];
        }
        tuples.push(t);
    }
    let normalized = normalize_tuples(tuples)?;
    let crossings = normalized.into_iter().map(crate::diagram::Crossing).collect();
    Ok(Diagram::new(crossings, free_loops)?)
}

/// The positive (p,q) torus knot as the closure of (s1 ... s_{p-1})^q.
pub fn torus_knot(p: i64, q: i64) -> Result<Diagram, GeneratorError> {
    if p < 2 || q <= p {
        return Err(GeneratorError::TorusRange(p, q));
    }
    if gcd(p as u64, q as u64) != 1 {
        return Err(GeneratorError::TorusGcd(p, q));
    }
    let word: Vec<i32> = (0..q).flat_map(|_| 1..p as i32).collect();
    let d = braid_closure(&word, p as usize)?;
    Ok(d.with_name(format!("T({p},{q})")))
}

/// Torus link closure permitting gcd > 1 (used by component-count checks).
pub fn torus_link(p: i64, q: i64) -> Result<Diagram, GeneratorError> {
    if p < 2 || q < 1 {
        return Err(GeneratorError::TorusRange(p, q));
    }
    let word: Vec<i32> = (0..q).flat_map(|_| 1..p as i32).collect();
    braid_closure(&word, p as usize)
}

/// Branch set of +-1/n surgery on T(2,q) under the involution of the torus
/// knot: the torus knot T(q, 2qn -+ 1).
pub fn seifert_branch_set(q: i64, n: i64, positive: bool) -> Result<Diagram, GeneratorError> {
    if q <= 1 || q % 2 == 0 || n <= 0 {
        return Err(GeneratorError::SeifertRange(q, n));
    }
    let big = if positive { 2 * q * n - 1 } else { 2 * q * n + 1 };
    torus_knot(q, big)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_knot_basics() {
        let t25 = torus_knot(2, 5).unwrap();
        assert_eq!(t25.crossing_count(), 5);
        assert_eq!(t25.writhe().unwrap(), 5);
        assert_eq!(t25.component_count(), 1);
        let t59 = torus_knot(5, 9).unwrap();
        assert_eq!(t59.crossing_count(), 36);
        assert_eq!(t59.writhe().unwrap(), 36);
        assert_eq!(t59.component_count(), 1);
    }

    #[test]
    fn torus_knot_errors() {
        assert!(matches!(torus_knot(4, 6), Err(GeneratorError::TorusGcd(4, 6))));
        assert!(matches!(torus_knot(5, 3), Err(GeneratorError::TorusRange(5, 3))));
        assert!(matches!(torus_knot(1, 3), Err(GeneratorError::TorusRange(1, 3))));
    }

    #[test]
    fn component_count_is_gcd() {
        for p in 2i64..=5 {
            for q in p..=11 {
                let d = torus_link(p, q).unwrap();
                assert_eq!(
                    d.component_count() as u64,
                    gcd(p as u64, q as u64),
                    "components of closure of ({p},{q}) braid"
                );
            }
        }
    }

    #[test]
    fn writhe_of_positive_braids() {
        for (p, q) in [(2i64, 3i64), (2, 7), (3, 4), (3, 5), (4, 5)] {
            let d = torus_knot(p, q).unwrap();
            assert_eq!(d.writhe().unwrap(), q * (p - 1));
        }
    }

    #[test]
    fn negative_braid_writhe() {
        let d = braid_closure(&[-1, -1, -1], 2).unwrap();
        assert_eq!(d.writhe().unwrap(), -3);
        assert_eq!(d.component_count(), 1);
    }

    #[test]
    fn mixed_braid_figure8() {
        // figure-8 knot: closure of (s1 s2^{-1})^2 on 3 strands
        let d = braid_closure(&[1, -2, 1, -2], 3).unwrap();
        assert_eq!(d.crossing_count(), 4);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.writhe().unwrap(), 0);
    }

    #[test]
    fn trivial_braid_closures() {
        let d = braid_closure(&[], 3).unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.free_loops, 3);
        assert_eq!(d.component_count(), 3);
    }

    #[test]
    fn seifert_branch_sets() {
        assert_eq!(seifert_branch_set(5, 1, true).unwrap().name.as_deref(), Some("T(5,9)"));
        assert_eq!(seifert_branch_set(5, 2, false).unwrap().name.as_deref(), Some("T(5,21)"));
        assert_eq!(seifert_branch_set(3, 1, false).unwrap().name.as_deref(), Some("T(3,7)"));
        assert!(seifert_branch_set(4, 1, true).is_err());
        assert!(seifert_branch_set(5, 0, true).is_err());
    }
}
