//! Planar link diagrams as PD codes.
//!
//! A crossing `X(a,b,c,d)` lists its four incident edge labels
//! counterclockwise, starting from the incoming under-strand. The
//! under-strand runs a -> c; the over-strand occupies slots 1 and 3 and its
//! direction is recovered by tracing orientations. A crossing is positive
//! when the over-strand runs d -> b.
//!
//! Crossingless unknot components have no edges to list; they are written as
//! bare `O` tokens and counted in [`Diagram::free_loops`]. The empty PD code
//! (zero crossings, one `O`) denotes the crossingless unknot.

use std::collections::HashMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

pub type EdgeId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed PD text near `{0}`")]
    Parse(String),
    #[error("crossing tuple has arity {0}, expected 4")]
    Arity(usize),
    #[error("empty PD input")]
    EmptyInput,
    #[error("edge {0} appears {1} times, expected 2")]
    EdgeDegree(EdgeId, usize),
    #[error("basepoint edge {0} is not a valid edge")]
    Basepoint(EdgeId),
    #[error("orientations cannot be traced consistently (edge {0})")]
    Orientation(EdgeId),
}

/// One crossing of a PD code: edges counterclockwise from the incoming
/// under-strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing(pub [EdgeId; 4]);

impl Crossing {
    pub fn under(&self) -> (EdgeId, EdgeId) {
        (self.0[0], self.0[2])
    }

    pub fn over(&self) -> (EdgeId, EdgeId) {
        (self.0[1], self.0[3])
    }
}

/// A link diagram: crossings plus any crossingless unknot components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub crossings: Vec<Crossing>,
    pub edge_count: u32,
    pub free_loops: u32,
    pub basepoint: Option<EdgeId>,
    pub name: Option<String>,
}

impl Diagram {
    pub fn new(crossings: Vec<Crossing>, free_loops: u32) -> Result<Self, DiagramError> {
        let edge_count = crossings
            .iter()
            .flat_map(|c| c.0.iter().copied())
            .max()
            .unwrap_or(0);
        let d = Diagram { crossings, edge_count, free_loops, basepoint: None, name: None };
        d.check_invariants()?;
        Ok(d)
    }

    pub fn unknot() -> Self {
        Diagram { crossings: Vec::new(), edge_count: 0, free_loops: 1, basepoint: None, name: None }
    }

    pub fn with_basepoint(mut self, edge: EdgeId) -> Result<Self, DiagramError> {
        if edge == 0 || edge > self.edge_count {
            return Err(DiagramError::Basepoint(edge));
        }
        self.basepoint = Some(edge);
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    fn check_invariants(&self) -> Result<(), DiagramError> {
        let mut degree = vec![0usize; self.edge_count as usize + 1];
        for c in &self.crossings {
            for &e in &c.0 {
                if e == 0 {
                    return Err(DiagramError::Parse("edge label 0".into()));
                }
                degree[e as usize] += 1;
            }
        }
        for e in 1..=self.edge_count {
            if degree[e as usize] != 2 {
                return Err(DiagramError::EdgeDegree(e, degree[e as usize]));
            }
        }
        if let Some(bp) = self.basepoint {
            if bp == 0 || bp > self.edge_count {
                return Err(DiagramError::Basepoint(bp));
            }
        }
        Ok(())
    }

    /// Non-erroring invariant report.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut degree: HashMap<EdgeId, usize> = HashMap::new();
        for c in &self.crossings {
            for &e in &c.0 {
                *degree.entry(e).or_insert(0) += 1;
            }
        }
        for e in 1..=self.edge_count {
            let d = degree.get(&e).copied().unwrap_or(0);
            if d != 2 {
                violations.push(format!("edge {e} appears {d} times, expected 2"));
            }
        }
        for (&e, &d) in degree.iter() {
            if e > self.edge_count {
                violations.push(format!("edge {e} exceeds edge count {}", self.edge_count));
            } else if d != 2 {
                // already reported above
            }
        }
        if let Some(bp) = self.basepoint {
            if bp == 0 || bp > self.edge_count {
                violations.push(format!("basepoint {bp} is not a valid edge"));
            }
        }
        let crossingless_unknot =
            self.crossings.is_empty() && self.free_loops == 1 && violations.is_empty();
        ValidationReport { violations, crossingless_unknot }
    }

    /// The two occurrences of each edge as (crossing index, slot).
    pub fn edge_ports(&self) -> Vec<[(usize, usize); 2]> {
        let mut ports: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.edge_count as usize + 1];
        for (ci, c) in self.crossings.iter().enumerate() {
            for (slot, &e) in c.0.iter().enumerate() {
                ports[e as usize].push((ci, slot));
            }
        }
        ports
            .into_iter()
            .map(|v| match v.len() {
                0 => [(usize::MAX, 0), (usize::MAX, 0)],
                2 => [v[0], v[1]],
                _ => [(usize::MAX, 0), (usize::MAX, 0)],
            })
            .collect()
    }

    /// Trace edge orientations. Returns, per crossing, whether the
    /// over-strand runs slot3 -> slot1 (the positive pattern).
    ///
    /// Slot 0 is incoming-under and slot 2 outgoing-under by convention; the
    /// over-strand direction propagates from those constraints. Components
    /// whose direction is unconstrained (always passing over) are oriented
    /// out of their lowest-numbered occurrence.
    pub fn trace_orientations(&self) -> Result<Vec<bool>, DiagramError> {
        let n = self.crossings.len();
        let ports = self.edge_ports();
        // direction[e]: Some(port index in ports[e]) of the port the edge
        // points INTO (its head).
        let mut head: Vec<Option<usize>> = vec![None; self.edge_count as usize + 1];
        let mut queue: Vec<EdgeId> = Vec::new();

        let set_head = |e: EdgeId,
                            which: usize,
                            head: &mut Vec<Option<usize>>,
                            queue: &mut Vec<EdgeId>|
         -> Result<(), DiagramError> {
            match head[e as usize] {
                None => {
                    head[e as usize] = Some(which);
                    queue.push(e);
                    Ok(())
                }
                Some(w) if w == which => Ok(()),
                Some(_) => Err(DiagramError::Orientation(e)),
            }
        };

        // Under-strand constraints: slot0 incoming (head here), slot2 outgoing.
        for (ci, c) in self.crossings.iter().enumerate() {
            let e_in = c.0[0];
            let which_in = ports[e_in as usize].iter().position(|&p| p == (ci, 0)).unwrap();
            set_head(e_in, which_in, &mut head, &mut queue)?;
            let e_out = c.0[2];
            let which_out = ports[e_out as usize].iter().position(|&p| p == (ci, 2)).unwrap();
            // outgoing at this port means the head is the *other* port
            set_head(e_out, 1 - which_out, &mut head, &mut queue)?;
        }

        // Propagate through over-strands: at each crossing slots 1 and 3 are
        // one-in one-out.
        let mut over_resolved = vec![false; n];
        loop {
            let mut progressed = false;
            for (ci, c) in self.crossings.iter().enumerate() {
                if over_resolved[ci] {
                    continue;
                }
                let (b, d) = (c.0[1], c.0[3]);
                let b_port = ports[b as usize].iter().position(|&p| p == (ci, 1)).unwrap();
                let d_port = ports[d as usize].iter().position(|&p| p == (ci, 3)).unwrap();
                let b_state = head[b as usize].map(|h| h == b_port); // Some(true) = b points in
                let d_state = head[d as usize].map(|h| h == d_port);
                let resolved = match (b_state, d_state) {
                    (Some(b_in), None) => {
                        set_head(d, if b_in { 1 - d_port } else { d_port }, &mut head, &mut queue)?;
                        true
                    }
                    (None, Some(d_in)) => {
                        set_head(b, if d_in { 1 - b_port } else { b_port }, &mut head, &mut queue)?;
                        true
                    }
                    (Some(b_in), Some(d_in)) => {
                        if b_in == d_in {
                            return Err(DiagramError::Orientation(b));
                        }
                        true
                    }
                    (None, None) => false,
                };
                if resolved {
                    over_resolved[ci] = true;
                    progressed = true;
                }
            }
            if !progressed {
                break;
            }
        }

        // Unconstrained over-only components: orient deterministically.
        for ci in 0..n {
            if over_resolved[ci] {
                continue;
            }
            let b = self.crossings[ci].0[1];
            if head[b as usize].is_none() {
                let b_port = ports[b as usize].iter().position(|&p| p == (ci, 1)).unwrap();
                set_head(b, b_port, &mut head, &mut queue)?;
                // re-run propagation
                let mut progressed = true;
                while progressed {
                    progressed = false;
                    for (cj, c) in self.crossings.iter().enumerate() {
                        if over_resolved[cj] {
                            continue;
                        }
                        let (b2, d2) = (c.0[1], c.0[3]);
                        let b_port2 =
                            ports[b2 as usize].iter().position(|&p| p == (cj, 1)).unwrap();
                        let d_port2 =
                            ports[d2 as usize].iter().position(|&p| p == (cj, 3)).unwrap();
                        let b_state = head[b2 as usize].map(|h| h == b_port2);
                        let d_state = head[d2 as usize].map(|h| h == d_port2);
                        match (b_state, d_state) {
                            (Some(bi), None) => {
                                set_head(
                                    d2,
                                    if bi { 1 - d_port2 } else { d_port2 },
                                    &mut head,
                                    &mut queue,
                                )?;
                                over_resolved[cj] = true;
                                progressed = true;
                            }
                            (None, Some(di)) => {
                                set_head(
                                    b2,
                                    if di { 1 - b_port2 } else { b_port2 },
                                    &mut head,
                                    &mut queue,
                                )?;
                                over_resolved[cj] = true;
                                progressed = true;
                            }
                            (Some(bi), Some(di)) => {
                                if bi == di {
                                    return Err(DiagramError::Orientation(b2));
                                }
                                over_resolved[cj] = true;
                                progressed = true;
                            }
                            (None, None) => {}
                        }
                    }
                }
            }
        }

        // Read off over-strand direction per crossing.
        let mut positive = vec![false; n];
        for (ci, c) in self.crossings.iter().enumerate() {
            let d = c.0[3];
            let d_port = ports[d as usize].iter().position(|&p| p == (ci, 3)).unwrap();
            let d_in = head[d as usize]
                .map(|h| h == d_port)
                .ok_or(DiagramError::Orientation(d))?;
            // over runs d -> b exactly when d is incoming at slot 3
            positive[ci] = d_in;
        }
        Ok(positive)
    }

    /// Signs of all crossings (+1/-1).
    pub fn signs(&self) -> Result<Vec<i32>, DiagramError> {
        Ok(self
            .trace_orientations()?
            .into_iter()
            .map(|p| if p { 1 } else { -1 })
            .collect())
    }

    pub fn writhe(&self) -> Result<i64, DiagramError> {
        Ok(self.signs()?.iter().map(|&s| s as i64).sum())
    }

    /// Counts of (positive, negative) crossings.
    pub fn signed_counts(&self) -> Result<(usize, usize), DiagramError> {
        let signs = self.signs()?;
        let pos = signs.iter().filter(|&&s| s > 0).count();
        Ok((pos, signs.len() - pos))
    }

    /// Switch every crossing: X(a,b,c,d) becomes X(d,a,b,c) when positive,
    /// X(b,c,d,a) when negative, so the incoming-under convention is kept.
    pub fn mirror(&self) -> Result<Diagram, DiagramError> {
        let positive = self.trace_orientations()?;
        let crossings = self
            .crossings
            .iter()
            .zip(positive)
            .map(|(c, pos)| {
                let [a, b, cc, d] = c.0;
                if pos {
                    Crossing([d, a, b, cc])
                } else {
                    Crossing([b, cc, d, a])
                }
            })
            .collect();
        Ok(Diagram {
            crossings,
            edge_count: self.edge_count,
            free_loops: self.free_loops,
            basepoint: self.basepoint,
            name: self.name.as_ref().map(|n| format!("{n}!")),
        })
    }

    /// Number of link components: edges glued through crossings, plus free
    /// loops.
    pub fn component_count(&self) -> u32 {
        if self.edge_count == 0 {
            return self.free_loops.max(1);
        }
        let mut uf = UnionFind::new(self.edge_count as usize + 1);
        for c in &self.crossings {
            uf.union(c.0[0] as usize, c.0[2] as usize);
            uf.union(c.0[1] as usize, c.0[3] as usize);
        }
        let mut roots: Vec<usize> = (1..=self.edge_count as usize).map(|e| uf.find(e)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len() as u32 + self.free_loops
    }

    /// True when the 4-valent graph underlying the diagram is disconnected
    /// (including any free loop alongside crossings).
    pub fn is_split(&self) -> bool {
        if self.crossings.is_empty() {
            return self.free_loops > 1;
        }
        if self.free_loops > 0 {
            return true;
        }
        let mut uf = UnionFind::new(self.crossings.len());
        let ports = self.edge_ports();
        for e in 1..=self.edge_count as usize {
            let [(c1, _), (c2, _)] = ports[e];
            uf.union(c1, c2);
        }
        let root = uf.find(0);
        (1..self.crossings.len()).any(|c| uf.find(c) != root)
    }

    /// Render in the PD text format, `O` per free loop, `bp=` suffix.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for _ in 0..self.free_loops {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push('O');
        }
        for c in &self.crossings {
            if !out.is_empty() {
                out.push(' ');
            }
            let [a, b, cc, d] = c.0;
            write!(out, "X({a},{b},{cc},{d})").unwrap();
        }
        if let Some(bp) = self.basepoint {
            write!(out, " bp={bp}").unwrap();
        }
        out
    }

    /// Deterministic digest of the canonicalized PD code plus basepoint.
    ///
    /// Canonical form: the lexicographically minimal relabeling over all
    /// starting edges and traversal directions, following strands through
    /// crossings; later components start at the unvisited edge incident to
    /// the lowest relabeled edge.
    pub fn digest(&self) -> String {
        let canon = self.canonical_serialization();
        let mut hasher = Sha256::new();
        hasher.update(canon.as_bytes());
        let out = hasher.finalize();
        out.iter().take(16).map(|b| format!("{b:02x}")).collect()
    }

    fn canonical_serialization(&self) -> String {
        if self.crossings.is_empty() {
            return format!("loops={};", self.free_loops);
        }
        let ports = self.edge_ports();
        let mut best: Option<String> = None;
        for start in 1..=self.edge_count {
            for dir in 0..2 {
                let ser = self.serialize_from(start, dir == 0, &ports);
                if best.as_ref().is_none_or(|b| ser < *b) {
                    best = Some(ser);
                }
            }
        }
        best.unwrap()
    }

    /// Relabel edges by traversal order starting from `start` and serialize.
    fn serialize_from(&self, start: EdgeId, forward: bool, ports: &[[(usize, usize); 2]]) -> String {
        let mut label: HashMap<EdgeId, u32> = HashMap::new();
        let mut next_label = 1u32;
        // walk(edge, entering port index): assign labels along the strand.
        let mut walk = |mut edge: EdgeId, mut via: usize, label: &mut HashMap<EdgeId, u32>| {
            loop {
                if label.contains_key(&edge) {
                    break;
                }
                label.insert(edge, next_label);
                next_label += 1;
                // continue through the crossing at the head port
                let (ci, slot) = ports[edge as usize][via];
                let next_slot = (slot + 2) % 4;
                let next_edge = self.crossings[ci].0[next_slot];
                let np = ports[next_edge as usize];
                // leave via the port that is this crossing/slot; head is the other
                let leaving = np.iter().position(|&p| p == (ci, next_slot)).unwrap();
                edge = next_edge;
                via = 1 - leaving;
            }
        };
        walk(start, if forward { 1 } else { 0 }, &mut label);
        // remaining components: start at the lowest-labeled crossing's
        // unvisited edge, in slot order
        loop {
            let mut candidate: Option<(u32, EdgeId, usize)> = None;
            for c in &self.crossings {
                let min_label = c.0.iter().filter_map(|e| label.get(e)).min().copied();
                let Some(ml) = min_label else { continue };
                for (slot, e) in c.0.iter().enumerate() {
                    if !label.contains_key(e) {
                        let key = (ml, *e, slot);
                        if candidate.is_none_or(|c0| key < c0) {
                            candidate = Some(key);
                        }
                    }
                }
            }
            match candidate {
                Some((_, e, _)) => walk(e, 0, &mut label),
                None => break,
            }
        }
        // any never-visited edges (shouldn't happen for valid diagrams)
        for e in 1..=self.edge_count {
            label.entry(e).or_insert_with(|| {
                let l = next_label;
                next_label += 1;
                l
            });
        }
        let mut tuples: Vec<[u32; 4]> = self
            .crossings
            .iter()
            .map(|c| {
                let m = |e: EdgeId| label[&e];
                [m(c.0[0]), m(c.0[1]), m(c.0[2]), m(c.0[3])]
            })
            .collect();
        tuples.sort_unstable();
        let mut out = String::new();
        write!(out, "loops={};", self.free_loops).unwrap();
        for t in tuples {
            write!(out, "X{},{},{},{};", t[0], t[1], t[2], t[3]).unwrap();
        }
        if let Some(bp) = self.basepoint {
            write!(out, "bp={}", label[&bp]).unwrap();
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub crossingless_unknot: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Parse the PD text format: whitespace-separated `X(a,b,c,d)` tuples,
/// optional `O` loop tokens, optional trailing `bp=<edge>`.
pub fn parse_pd(text: &str) -> Result<Diagram, DiagramError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(DiagramError::EmptyInput);
    }
    let mut crossings = Vec::new();
    let mut free_loops = 0u32;
    let mut basepoint = None;
    for tok in trimmed.split_whitespace() {
        if tok == "O" {
            free_loops += 1;
            continue;
        }
        if let Some(rest) = tok.strip_prefix("bp=") {
            let e: EdgeId =
                rest.parse().map_err(|_| DiagramError::Parse(tok.to_string()))?;
            basepoint = Some(e);
            continue;
        }
        let body = tok
            .strip_prefix("X(")
            .or_else(|| tok.strip_prefix("X["))
            .and_then(|s| s.strip_suffix(')').or_else(|| s.strip_suffix(']')))
            .ok_or_else(|| DiagramError::Parse(tok.to_string()))?;
        let parts: Vec<&str> = body.split(',').collect();
        if parts.len() != 4 {
            return Err(DiagramError::Arity(parts.len()));
        }
        let mut tuple = [0u32; 4];
        for (i, p) in parts.iter().enumerate() {
            let v: u32 = p.trim().parse().map_err(|_| DiagramError::Parse(tok.to_string()))?;
            if v == 0 {
                return Err(DiagramError::Parse(tok.to_string()));
            }
            tuple[i] = v;
        }
        crossings.push(Crossing(tuple));
    }
    let mut d = Diagram::new(crossings, free_loops)?;
    if let Some(bp) = basepoint {
        d = d.with_basepoint(bp)?;
    }
    Ok(d)
}

/// Plain union-find used across the crate.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const TREFOIL: &str = "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)";

    #[test]
    fn parse_trefoil() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.edge_count, 6);
        assert!(d.validate().passed());
        assert_eq!(d.component_count(), 1);
    }

    #[test]
    fn parse_tabulated_style_code() {
        // validation is purely the degree-2 edge check
        let d = parse_pd("X(1,4,2,3) X(3,6,4,5) X(5,2,6,1)").unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.edge_count, 6);
        assert!(d.validate().passed());
    }

    #[test]
    fn parse_kink() {
        let d = parse_pd("X(1,1,2,2)").unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.component_count(), 1);
    }

    #[test]
    fn parse_arity_error() {
        assert_eq!(parse_pd("X(1,2,3)"), Err(DiagramError::Arity(3)));
    }

    #[test]
    fn parse_empty_error() {
        assert_eq!(parse_pd("  "), Err(DiagramError::EmptyInput));
    }

    #[test]
    fn bad_edge_degree() {
        let r = parse_pd("X(1,4,2,3) X(3,5,4,1)");
        assert!(matches!(r, Err(DiagramError::EdgeDegree(_, 1))));
        // the report names every bad edge, including 5
        let d = Diagram {
            crossings: vec![Crossing([1, 4, 2, 3]), Crossing([3, 5, 4, 1])],
            edge_count: 5,
            free_loops: 0,
            basepoint: None,
            name: None,
        };
        let rep = d.validate();
        assert!(!rep.passed());
        assert!(rep.violations.iter().any(|v| v.contains("edge 5")));
    }

    #[test]
    fn crossingless_unknot_validates() {
        let d = parse_pd("O").unwrap();
        let rep = d.validate();
        assert!(rep.passed());
        assert!(rep.crossingless_unknot);
        assert_eq!(d.component_count(), 1);
    }

    #[test]
    fn trefoil_writhe_and_signs() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.writhe().unwrap(), 3);
        assert_eq!(d.signs().unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn kink_signs() {
        assert_eq!(parse_pd("X(1,1,2,2)").unwrap().writhe().unwrap(), 1);
        assert_eq!(parse_pd("X(1,2,2,1)").unwrap().writhe().unwrap(), -1);
    }

    #[test]
    fn mirror_negates_writhe_and_is_involutive() {
        let d = parse_pd(TREFOIL).unwrap();
        let m = d.mirror().unwrap();
        assert_eq!(m.writhe().unwrap(), -3);
        let mm = m.mirror().unwrap();
        assert_eq!(mm.crossings, d.crossings);
    }

    #[test]
    fn component_counts() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.component_count(), 1);
        // Hopf link
        let h = parse_pd("X(1,3,2,4) X(3,1,4,2)").unwrap();
        assert_eq!(h.component_count(), 2);
    }

    #[test]
    fn digest_order_invariance() {
        let a = parse_pd(TREFOIL).unwrap();
        let b = parse_pd("X(3,1,4,6) X(5,3,6,2) X(1,5,2,4)").unwrap();
        assert_eq!(a.digest(), b.digest());
    }

    #[test]
    fn digest_relabel_invariance() {
        // same trefoil with all labels shifted cyclically along the knot
        let a = parse_pd(TREFOIL).unwrap();
        let b = parse_pd("X(2,6,3,5) X(4,2,5,1) X(6,4,1,3)").unwrap();
        assert_eq!(a.digest(), b.digest());
    }

    #[test]
    fn digest_mirror_and_basepoint_distinct() {
        let a = parse_pd(TREFOIL).unwrap();
        let m = a.mirror().unwrap();
        assert_ne!(a.digest(), m.digest());
        let bp = a.clone().with_basepoint(2).unwrap();
        assert_ne!(a.digest(), bp.digest());
    }

    #[test]
    fn render_roundtrip() {
        let d = parse_pd(TREFOIL).unwrap().with_basepoint(1).unwrap();
        let r = d.render();
        let d2 = parse_pd(&r).unwrap();
        assert_eq!(d, d2);
    }
}
