//! Labelled quadrilateral cell complexes.
//!
//! Faces are stored as cyclic quadruples `(i, j, k, l)` whose edges `(ij)`
//! and `(kl)` carry the label `−` and whose edges `(jk)` and `(li)` carry
//! the label `+`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Label {
    pub fn opposite(self) -> Label {
        match self {
            Label::Plus => Label::Minus,
            Label::Minus => Label::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Label::Plus => "+",
            Label::Minus => "-",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl std::str::FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Label> {
        match s {
            "+" | "plus" => Ok(Label::Plus),
            "-" | "−" | "minus" => Ok(Label::Minus),
            _ => Err(Error::InvalidParameter(format!("unknown label `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub label: Label,
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }
}

/// Grid dimensions of complexes built by [`QuadComplex::grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridShape {
    pub n_plus: usize,
    pub n_minus: usize,
    pub wrap_plus: bool,
}

/// A coordinate line: vertices joined by edges of one label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub vertices: Vec<usize>,
    pub closed: bool,
}

impl Line {
    /// Consecutive vertex pairs, including the closing pair of a cycle.
    pub fn segments(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        let mut out: Vec<(usize, usize)> = self.vertices.windows(2).map(|w| (w[0], w[1])).collect();
        if self.closed && n > 2 {
            out.push((self.vertices[n - 1], self.vertices[0]));
        }
        out
    }
}

/// A maximal strip of faces glued along edges of the opposite label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ribbon {
    pub faces: Vec<usize>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    OddInteriorDegree { vertex: usize, degree: usize },
    FaceLabel { face: usize, edge: (usize, usize) },
    MissingFaceEdge { face: usize, edge: (usize, usize) },
    RepeatedFaceVertex { face: usize },
    EdgeFaces { edge: usize, count: usize },
    DuplicateEdge { edge: usize },
    Disconnected { components: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OddInteriorDegree { vertex, degree } => {
                write!(f, "interior vertex {vertex} has odd degree {degree}")
            }
            Violation::FaceLabel { face, edge } => {
                write!(
                    f,
                    "face {face}: edge ({}, {}) has the wrong label",
                    edge.0, edge.1
                )
            }
            Violation::MissingFaceEdge { face, edge } => {
                write!(f, "face {face}: edge ({}, {}) is missing", edge.0, edge.1)
            }
            Violation::RepeatedFaceVertex { face } => write!(f, "face {face} repeats a vertex"),
            Violation::EdgeFaces { edge, count } => {
                write!(f, "edge {edge} belongs to {count} faces")
            }
            Violation::DuplicateEdge { edge } => write!(f, "edge {edge} is duplicated"),
            Violation::Disconnected { components } => {
                write!(f, "complex has {components} connected components")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadComplex {
    n_vertices: usize,
    edges: Vec<Edge>,
    faces: Vec<[usize; 4]>,
    grid: Option<GridShape>,
    edge_index: HashMap<(usize, usize), usize>,
    edge_faces: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Edges of a face in the order `(ij), (jk), (kl), (li)`.
pub fn face_edge_pairs(f: &[usize; 4]) -> [(usize, usize); 4] {
    [(f[0], f[1]), (f[1], f[2]), (f[2], f[3]), (f[3], f[0])]
}

/// Expected labels of [`face_edge_pairs`].
pub const FACE_LABELS: [Label; 4] = [Label::Minus, Label::Plus, Label::Minus, Label::Plus];

impl QuadComplex {
    /// Build from explicit edge and face lists. Structural problems other
    /// than out-of-range ids are left to [`QuadComplex::validate`].
    pub fn new(n_vertices: usize, edges: Vec<Edge>, faces: Vec<[usize; 4]>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::InvalidComplex("no vertices".into()));
        }
        for e in &edges {
            if e.a >= n_vertices || e.b >= n_vertices {
                return Err(Error::InvalidComplex(format!(
                    "edge ({}, {}) references a missing vertex",
                    e.a, e.b
                )));
            }
            if e.a == e.b {
                return Err(Error::InvalidComplex(format!("loop at vertex {}", e.a)));
            }
        }
        for f in &faces {
            if f.iter().any(|v| *v >= n_vertices) {
                return Err(Error::InvalidComplex(format!(
                    "face {f:?} references a missing vertex"
                )));
            }
        }
        let mut edge_index = HashMap::new();
        let mut incident = vec![Vec::new(); n_vertices];
        for (id, e) in edges.iter().enumerate() {
            edge_index.entry(key(e.a, e.b)).or_insert(id);
            incident[e.a].push(id);
            incident[e.b].push(id);
        }
        let mut edge_faces = vec![Vec::new(); edges.len()];
        for (fid, f) in faces.iter().enumerate() {
            for (a, b) in face_edge_pairs(f) {
                if let Some(&e) = edge_index.get(&key(a, b)) {
                    edge_faces[e].push(fid);
                }
            }
        }
        Ok(Self {
            n_vertices,
            edges,
            faces,
            grid: None,
            edge_index,
            edge_faces,
            incident,
        })
    }

    /// Build from faces alone, deriving edges and labels from the face
    /// convention.
    pub fn from_faces(n_vertices: usize, faces: Vec<[usize; 4]>) -> Result<Self> {
        let mut seen = HashMap::new();
        let mut edges = Vec::new();
        for f in &faces {
            for ((a, b), label) in face_edge_pairs(f).into_iter().zip(FACE_LABELS) {
                if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(key(a, b)) {
                    slot.insert(label);
                    edges.push(Edge { a, b, label });
                }
            }
        }
        Self::new(n_vertices, edges, faces)
    }

    /// Grid with `n_plus` vertices along each `+` line and `n_minus` along
    /// each `−` line. Vertex `(a, b)` has id `a + n_plus·b`; `+` edges join
    /// `(a, b)` and `(a+1, b)`.
    pub fn grid(n_plus: usize, n_minus: usize, wrap_plus: bool) -> Result<Self> {
        if n_plus < 2 || n_minus < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 2×2 vertices, got {n_plus}×{n_minus}"
            )));
        }
        if wrap_plus && n_plus < 3 {
            return Err(Error::InvalidParameter(
                "a wrapped grid needs at least 3 vertices per + line".into(),
            ));
        }
        let id = |a: usize, b: usize| a % n_plus + n_plus * b;
        let na = if wrap_plus { n_plus } else { n_plus - 1 };
        let mut edges = Vec::new();
        for b in 0..n_minus {
            for a in 0..na {
                edges.push(Edge {
                    a: id(a, b),
                    b: id(a + 1, b),
                    label: Label::Plus,
                });
            }
        }
        for b in 0..n_minus - 1 {
            for a in 0..n_plus {
                edges.push(Edge {
                    a: id(a, b),
                    b: id(a, b + 1),
                    label: Label::Minus,
                });
            }
        }
        let mut faces = Vec::new();
        for b in 0..n_minus - 1 {
            for a in 0..na {
                faces.push([id(a, b), id(a, b + 1), id(a + 1, b + 1), id(a + 1, b)]);
            }
        }
        let mut c = Self::new(n_plus * n_minus, edges, faces)?;
        c.grid = Some(GridShape {
            n_plus,
            n_minus,
            wrap_plus,
        });
        Ok(c)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[[usize; 4]] {
        &self.faces
    }

    pub fn grid_shape(&self) -> Option<GridShape> {
        self.grid
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&key(a, b)).copied()
    }

    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn faces_of_edge(&self, e: usize) -> &[usize] {
        &self.edge_faces[e]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    /// Edge ids of a face in the order `(ij), (jk), (kl), (li)`.
    pub fn face_edges(&self, f: usize) -> Result<[usize; 4]> {
        let pairs = face_edge_pairs(&self.faces[f]);
        let mut out = [0; 4];
        for (slot, (a, b)) in out.iter_mut().zip(pairs) {
            *slot = self.edge_between(a, b).ok_or_else(|| {
                Error::InvalidComplex(format!("face {f}: edge ({a}, {b}) is missing"))
            })?;
        }
        Ok(out)
    }

    /// A vertex is interior when every incident edge borders two faces.
    pub fn is_interior(&self, v: usize) -> bool {
        !self.incident[v].is_empty()
            && self.incident[v]
                .iter()
                .all(|e| self.edge_faces[*e].len() == 2)
    }

    /// The complex with `+` and `−` exchanged; faces are rotated to keep
    /// the storage convention.
    pub fn swap_labels(&self) -> QuadComplex {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                label: e.label.opposite(),
                ..*e
            })
            .collect();
        let faces = self
            .faces
            .iter()
            .map(|f| [f[1], f[2], f[3], f[0]])
            .collect();
        QuadComplex::new(self.n_vertices, edges, faces).expect("relabelling keeps ids valid")
    }

    /// Coordinate lines following edges labelled `label`, ordered by their
    /// first vertex. Each line starts at an end (or its smallest vertex for
    /// cycles) and proceeds to the smaller neighbour first.
    pub fn lines(&self, label: Label) -> Vec<Line> {
        let nbrs: Vec<Vec<usize>> = (0..self.n_vertices)
            .map(|v| {
                let mut n: Vec<usize> = self.incident[v]
                    .iter()
                    .filter(|e| self.edges[**e].label == label)
                    .map(|e| self.edges[*e].other(v))
                    .collect();
                n.sort_unstable();
                n.dedup();
                n
            })
            .collect();
        let mut visited = vec![false; self.n_vertices];
        let mut lines = Vec::new();
        let mut order: Vec<usize> = (0..self.n_vertices)
            .filter(|v| !nbrs[*v].is_empty())
            .collect();
        // Path ends first so open lines start at an end.
        order.sort_by_key(|v| (nbrs[*v].len() != 1, *v));
        for start in order {
            if visited[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            let mut in_comp = BTreeSet::new();
            in_comp.insert(start);
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for w in &nbrs[v] {
                    if in_comp.insert(*w) {
                        queue.push_back(*w);
                    }
                }
            }
            let simple = comp.iter().all(|v| nbrs[*v].len() <= 2);
            let closed = simple && comp.iter().all(|v| nbrs[*v].len() == 2) && comp.len() > 2;
            let vertices = if simple {
                let first = if closed {
                    *in_comp.iter().next().unwrap()
                } else {
                    start
                };
                let mut path = vec![first];
                let mut prev = usize::MAX;
                let mut cur = first;
                loop {
                    let next = nbrs[cur]
                        .iter()
                        .copied()
                        .find(|w| *w != prev && !path.contains(w));
                    match next {
                        Some(w) => {
                            path.push(w);
                            prev = cur;
                            cur = w;
                        }
                        None => break,
                    }
                }
                path
            } else {
                comp
            };
            for v in &vertices {
                visited[*v] = true;
            }
            lines.push(Line { vertices, closed });
        }
        lines.sort_by_key(|l| l.vertices[0]);
        lines
    }

    /// `label`-ribbons: maximal strips of faces glued along edges of the
    /// opposite label, ordered by their smallest face.
    pub fn ribbons(&self, label: Label) -> Vec<Ribbon> {
        let glue = label.opposite();
        let nbrs: Vec<Vec<usize>> = (0..self.faces.len())
            .map(|f| {
                let mut n = Vec::new();
                for (a, b) in face_edge_pairs(&self.faces[f]) {
                    if let Some(e) = self.edge_between(a, b) {
                        if self.edges[e].label == glue {
                            for g in &self.edge_faces[e] {
                                if *g != f {
                                    n.push(*g);
                                }
                            }
                        }
                    }
                }
                n.sort_unstable();
                n.dedup();
                n
            })
            .collect();
        let mut visited = vec![false; self.faces.len()];
        let mut out = Vec::new();
        let mut order: Vec<usize> = (0..self.faces.len()).collect();
        order.sort_by_key(|f| (nbrs[*f].len() > 1, *f));
        for start in order {
            if visited[start] {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            comp.insert(start);
            while let Some(f) = queue.pop_front() {
                for g in &nbrs[f] {
                    if comp.insert(*g) {
                        queue.push_back(*g);
                    }
                }
            }
            let closed = comp.len() > 2 && comp.iter().all(|f| nbrs[*f].len() == 2);
            let first = if closed {
                *comp.iter().next().unwrap()
            } else {
                start
            };
            let mut strip = vec![first];
            let mut cur = first;
            while let Some(g) = nbrs[cur].iter().copied().find(|g| !strip.contains(g)) {
                strip.push(g);
                cur = g;
            }
            for f in &comp {
                visited[*f] = true;
                if !strip.contains(f) {
                    strip.push(*f);
                }
            }
            out.push(Ribbon {
                faces: strip,
                closed,
            });
        }
        out.sort_by_key(|r| *r.faces.iter().min().unwrap());
        out
    }

    /// Report every violated structural invariant.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for v in 0..self.n_vertices {
            if self.is_interior(v) && self.degree(v) % 2 == 1 {
                out.push(Violation::OddInteriorDegree {
                    vertex: v,
                    degree: self.degree(v),
                });
            }
        }
        for (id, e) in self.edges.iter().enumerate() {
            if self.edge_index[&key(e.a, e.b)] != id {
                out.push(Violation::DuplicateEdge { edge: id });
            }
            if self.edge_faces[id].len() > 2 {
                out.push(Violation::EdgeFaces {
                    edge: id,
                    count: self.edge_faces[id].len(),
                });
            }
        }
        for (fid, f) in self.faces.iter().enumerate() {
            let distinct: BTreeSet<usize> = f.iter().copied().collect();
            if distinct.len() != 4 {
                out.push(Violation::RepeatedFaceVertex { face: fid });
            }
            for ((a, b), label) in face_edge_pairs(f).into_iter().zip(FACE_LABELS) {
                match self.edge_between(a, b) {
                    None => out.push(Violation::MissingFaceEdge {
                        face: fid,
                        edge: (a, b),
                    }),
                    Some(e) if self.edges[e].label != label => out.push(Violation::FaceLabel {
                        face: fid,
                        edge: (a, b),
                    }),
                    _ => {}
                }
            }
        }
        let components = self.components();
        if components > 1 {
            out.push(Violation::Disconnected { components });
        }
        out
    }

    fn components(&self) -> usize {
        let mut seen = vec![false; self.n_vertices];
        let mut count = 0;
        for s in 0..self.n_vertices {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for e in &self.incident[v] {
                    let w = self.edges[*e].other(v);
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn count(c: &QuadComplex, label: Label) -> usize {
        c.edges().iter().filter(|e| e.label == label).count()
    }

    #[test]
    fn grid_counts() {
        let c = QuadComplex::grid(3, 3, false).unwrap();
        assert_eq!(c.n_vertices(), 9);
        assert_eq!(c.edges().len(), 12);
        assert_eq!(count(&c, Label::Plus), 6);
        assert_eq!(count(&c, Label::Minus), 6);
        assert_eq!(c.faces().len(), 4);
        assert!(c.validate().is_empty());

        let w = QuadComplex::grid(4, 2, true).unwrap();
        assert_eq!(w.n_vertices(), 8);
        assert_eq!(w.edges().len(), 12);
        assert_eq!(w.faces().len(), 4);
        for line in w.lines(Label::Plus) {
            assert!(line.closed);
            assert_eq!(line.vertices.len(), 4);
        }
        assert!(w.validate().is_empty());

        assert!(QuadComplex::grid(1, 5, false).is_err());
        assert!(QuadComplex::grid(2, 5, true).is_err());
    }

    #[test]
    fn lines_and_ribbons() {
        let c = QuadComplex::grid(3, 3, false).unwrap();
        let plus = c.lines(Label::Plus);
        assert_eq!(plus.len(), 3);
        assert_eq!(plus[1].vertices, vec![3, 4, 5]);
        assert!(plus.iter().all(|l| !l.closed && l.vertices.len() == 3));
        let minus = c.lines(Label::Minus);
        assert_eq!(minus[2].vertices, vec![2, 5, 8]);
        let rp = c.ribbons(Label::Plus);
        assert_eq!(rp.len(), 2);
        assert_eq!(rp[0].faces, vec![0, 1]);
        assert_eq!(rp[1].faces, vec![2, 3]);
        let rm = c.ribbons(Label::Minus);
        assert_eq!(rm[0].faces, vec![0, 2]);
    }

    #[test]
    fn single_face() {
        let c = QuadComplex::grid(2, 2, false).unwrap();
        assert_eq!(
            c.ribbons(Label::Plus),
            vec![Ribbon {
                faces: vec![0],
                closed: false
            }]
        );
        assert_eq!(
            c.ribbons(Label::Minus),
            vec![Ribbon {
                faces: vec![0],
                closed: false
            }]
        );
    }

    #[test]
    fn wrapped_ribbons_close() {
        let c = QuadComplex::grid(5, 3, true).unwrap();
        let r = c.ribbons(Label::Plus);
        assert_eq!(r.len(), 2);
        assert!(r[0].closed);
        assert_eq!(r[0].faces, vec![0, 1, 2, 3, 4]);
        assert_eq!(c.lines(Label::Plus)[0].vertices, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn violations_flagged() {
        let c = QuadComplex::grid(3, 3, false).unwrap();
        let mut edges = c.edges().to_vec();
        let e = c.edge_between(0, 3).unwrap();
        edges[e].label = Label::Plus;
        let bad = QuadComplex::new(9, edges, c.faces().to_vec()).unwrap();
        assert!(bad
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::FaceLabel { face: 0, .. })));
    }

    #[test]
    fn odd_interior_vertex() {
        // Three quads around a vertex: every edge at the centre has two faces.
        let faces = vec![[0, 1, 2, 3], [0, 3, 4, 5], [0, 5, 6, 1]];
        let c = QuadComplex::from_faces(7, faces).unwrap();
        assert!(c.validate().iter().any(|v| matches!(
            v,
            Violation::OddInteriorDegree {
                vertex: 0,
                degree: 3
            }
        )));
    }

    proptest! {
        #[test]
        fn ribbons_partition_faces(n_plus in 3usize..8, n_minus in 2usize..8, wrap in any::<bool>()) {
            let c = QuadComplex::grid(n_plus, n_minus, wrap).unwrap();
            let expected = if wrap { n_plus * (n_minus - 1) } else { (n_plus - 1) * (n_minus - 1) };
            prop_assert_eq!(c.faces().len(), expected);
            for label in [Label::Plus, Label::Minus] {
                let mut all: Vec<usize> = c.ribbons(label).into_iter().flat_map(|r| r.faces).collect();
                all.sort_unstable();
                prop_assert_eq!(all, (0..expected).collect::<Vec<_>>());
            }
        }

        #[test]
        fn relabel_swaps_lines(n_plus in 3usize..7, n_minus in 2usize..7, wrap in any::<bool>()) {
            let c = QuadComplex::grid(n_plus, n_minus, wrap).unwrap();
            let s = c.swap_labels();
            prop_assert!(s.validate().is_empty());
            prop_assert_eq!(s.lines(Label::Plus), c.lines(Label::Minus));
            prop_assert_eq!(s.lines(Label::Minus), c.lines(Label::Plus));
        }
    }
}
