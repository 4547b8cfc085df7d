//! Surface-code lattice builders.
//!
//! Coordinates follow the usual planar-code drawing: rows and columns are
//! numbered `0, 1, 2, ...`; vertices sit at (even, even), plaquettes at
//! (odd, odd) and edges (the qubits) where the parities differ. Qudits are
//! indexed row-major over the coordinates of the edges that exist.
//!
//! The twist lattice is the exception: it lives on the medial (rotated)
//! lattice, where qubits are the integer points `[row, col]` and every
//! generator is a face.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{GeneratorType, Letter, PauliString, StabilizerGroup};

pub type Coord = [usize; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    Torus,
    Planar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Smooth,
    Rough,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boundary {
    pub top: Side,
    pub bottom: Side,
    pub left: Side,
    pub right: Side,
}

impl Boundary {
    pub fn all(side: Side) -> Self {
        Boundary { top: side, bottom: side, left: side, right: side }
    }

    /// Smooth top and left, rough bottom and right.
    pub fn mixed() -> Self {
        Boundary { top: Side::Smooth, left: Side::Smooth, bottom: Side::Rough, right: Side::Rough }
    }
}

/// A rectangular hole. `region` is `[i0, j0, i1, j1]`, inclusive, with the
/// corners on vertices. A smooth hole removes everything strictly inside
/// the rectangle; a rough hole removes every vertex of the rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defect {
    #[serde(rename = "type")]
    pub kind: Side,
    pub region: [usize; 4],
}

/// Single domain wall ending in one twist, on the medial lattice.
///
/// `path` lists the column of removed qubits above the twist; it must run
/// straight from the twist to the top edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub path: Vec<Coord>,
    pub twist_endpoint: Coord,
}

fn default_d() -> u32 {
    2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    pub rows: usize,
    pub cols: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Boundary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub defects: Vec<Defect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall: Option<Wall>,
    #[serde(default = "default_d")]
    pub d: u32,
}

impl LatticeSpec {
    pub fn torus(rows: usize, cols: usize) -> Self {
        LatticeSpec { kind: LatticeKind::Torus, rows, cols, boundary: None, defects: vec![], wall: None, d: 2 }
    }

    pub fn planar(rows: usize, cols: usize, boundary: Boundary) -> Self {
        LatticeSpec {
            kind: LatticeKind::Planar,
            rows,
            cols,
            boundary: Some(boundary),
            defects: vec![],
            wall: None,
            d: 2,
        }
    }

    pub fn with_defect(mut self, kind: Side, region: [usize; 4]) -> Self {
        self.defects.push(Defect { kind, region });
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryTag {
    Bulk,
    Corner,
    Boundary,
    Defect,
    Wall,
    Twist,
}

/// One Hamiltonian term with its geometric anchor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub label: String,
    /// Vertex or plaquette coordinate (face anchor on the medial lattice).
    pub site: Coord,
    pub tag: GeometryTag,
    pub op: PauliString,
    /// For D(Z_d) plaquettes: `(qudit, sign)` with `+1` for edges pointing
    /// along the plaquette's counter-clockwise circulation.
    pub signs: Vec<(usize, i32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCode {
    pub spec: LatticeSpec,
    /// Qudit index to coordinate.
    pub edges: Vec<Coord>,
    /// Every local term, possibly overcomplete.
    pub terms: Vec<Term>,
    /// Independent generators: `terms` minus later dependent ones.
    pub group: StabilizerGroup,
    /// `group.generators()[g]` is `terms[kept[g]].op`.
    pub kept: Vec<usize>,
}

impl LatticeCode {
    pub fn n(&self) -> usize {
        self.edges.len()
    }

    pub fn qudit(&self, c: Coord) -> Option<usize> {
        self.edges.binary_search(&c).ok()
    }

    /// All terms as one (commuting) generator list.
    pub fn hamiltonian(&self) -> StabilizerGroup {
        StabilizerGroup::from_terms(
            self.n(),
            self.spec.d,
            self.terms.iter().map(|t| t.op.clone()).collect(),
            self.terms.iter().map(|t| t.label.clone()).collect(),
        )
        .expect("terms commute by construction")
    }

    pub fn term(&self, label: &str) -> Option<&Term> {
        self.terms.iter().find(|t| t.label == label)
    }

    fn finish(spec: LatticeSpec, edges: Vec<Coord>, terms: Vec<Term>) -> Result<LatticeCode> {
        let n = edges.len();
        if n == 0 {
            return Err(Error::Lattice("lattice has no qudits".into()));
        }
        let all = StabilizerGroup::from_terms(
            n,
            spec.d,
            terms.iter().map(|t| t.op.clone()).collect(),
            terms.iter().map(|t| t.label.clone()).collect(),
        )
        .map_err(|e| Error::Internal(format!("lattice terms: {e}")))?;
        let group = all.independent_subset()?;
        let mut kept = Vec::with_capacity(group.len());
        let mut next = 0;
        for l in group.labels() {
            while terms[next].label != *l {
                next += 1;
            }
            kept.push(next);
            next += 1;
        }
        Ok(LatticeCode { spec, edges, terms, group, kept })
    }
}

impl fmt::Display for LatticeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} qudits, {} terms, {} independent", self.n(), self.terms.len(), self.group.len())
    }
}

pub fn site_label(prefix: &str, c: Coord) -> String {
    if c[0] < 10 && c[1] < 10 {
        format!("{prefix}_{{{}{}}}", c[0], c[1])
    } else {
        format!("{prefix}_{{{},{}}}", c[0], c[1])
    }
}

/// Build whatever `spec` describes.
pub fn build(spec: &LatticeSpec) -> Result<LatticeCode> {
    if spec.wall.is_some() {
        build_twist(spec)
    } else if spec.d != 2 {
        if spec.kind != LatticeKind::Torus || !spec.defects.is_empty() {
            return Err(Error::Lattice("qudit lattices are defect-free tori".into()));
        }
        build_zd(spec.rows, spec.cols, spec.d)
    } else {
        build_surface(spec)
    }
}

pub fn build_toric(rows: usize, cols: usize) -> Result<LatticeCode> {
    build_surface(&LatticeSpec::torus(rows, cols))
}

pub fn build_planar(spec: &LatticeSpec) -> Result<LatticeCode> {
    if spec.kind != LatticeKind::Planar {
        return Err(Error::Lattice("build_planar needs a planar spec".into()));
    }
    build_surface(spec)
}

pub fn build_defect(spec: &LatticeSpec) -> Result<LatticeCode> {
    if spec.defects.is_empty() {
        return Err(Error::Lattice("no defects given".into()));
    }
    build_surface(spec)
}

/// Coordinate bookkeeping shared by torus and planar builds.
struct Grid<'a> {
    spec: &'a LatticeSpec,
    torus: bool,
    h: usize,
    w: usize,
}

impl Grid<'_> {
    /// Is `x` within `len` steps above `lo` (wrapping on a torus)?
    fn in_span(&self, x: usize, lo: isize, len: usize, period: usize, strict: bool) -> bool {
        let off = if self.torus {
            (x as isize - lo).rem_euclid(period as isize)
        } else {
            x as isize - lo
        };
        if strict {
            off > 0 && (off as usize) < len
        } else {
            off >= 0 && (off as usize) <= len
        }
    }

    fn in_region(&self, c: Coord, r: [usize; 4], strict: bool) -> bool {
        self.in_span(c[0], r[0] as isize, r[2] - r[0], self.h, strict)
            && self.in_span(c[1], r[1] as isize, r[3] - r[1], self.w, strict)
    }

    /// Normalize a signed coordinate; `None` if it is outside a planar grid.
    fn at(&self, i: isize, j: isize) -> Option<Coord> {
        if self.torus {
            Some([i.rem_euclid(self.h as isize) as usize, j.rem_euclid(self.w as isize) as usize])
        } else if i < 0 || j < 0 || i >= self.h as isize || j >= self.w as isize {
            None
        } else {
            Some([i as usize, j as usize])
        }
    }

    fn vertex_present(&self, c: Coord) -> bool {
        if !self.torus {
            let b = self.spec.boundary.unwrap_or(Boundary::all(Side::Smooth));
            let rough_side = (c[0] == 0 && b.top == Side::Rough)
                || (c[0] == self.h - 1 && b.bottom == Side::Rough)
                || (c[1] == 0 && b.left == Side::Rough)
                || (c[1] == self.w - 1 && b.right == Side::Rough);
            if rough_side {
                return false;
            }
        }
        self.spec.defects.iter().all(|d| match d.kind {
            Side::Rough => !self.in_region(c, d.region, false),
            Side::Smooth => !self.in_region(c, d.region, true),
        })
    }

    /// Corners of a smooth hole carry no star.
    fn vertex_crossed(&self, c: Coord) -> bool {
        self.spec.defects.iter().any(|d| {
            d.kind == Side::Smooth && {
                let r = d.region;
                let hit = |x: usize, a: usize, p: usize| if self.torus { x % p == a % p } else { x == a };
                (hit(c[0], r[0], self.h) || hit(c[0], r[2], self.h)) && (hit(c[1], r[1], self.w) || hit(c[1], r[3], self.w))
            }
        })
    }

    fn endpoints(&self, e: Coord) -> [Option<Coord>; 2] {
        let (i, j) = (e[0] as isize, e[1] as isize);
        if e[0] % 2 == 0 {
            [self.at(i, j - 1), self.at(i, j + 1)]
        } else {
            [self.at(i - 1, j), self.at(i + 1, j)]
        }
    }

    fn edge_present(&self, e: Coord) -> bool {
        if self.spec.defects.iter().any(|d| d.kind == Side::Smooth && self.in_region(e, d.region, true)) {
            return false;
        }
        self.endpoints(e).iter().flatten().any(|v| self.vertex_present(*v))
    }

    fn near_defect(&self, c: Coord) -> bool {
        self.spec.defects.iter().any(|d| {
            let r = d.region;
            self.in_span(c[0], r[0] as isize - 1, r[2] - r[0] + 2, self.h, false)
                && self.in_span(c[1], r[1] as isize - 1, r[3] - r[1] + 2, self.w, false)
        })
    }
}

fn validate(spec: &LatticeSpec) -> Result<()> {
    let torus = spec.kind == LatticeKind::Torus;
    if torus && (spec.rows < 2 || spec.cols < 2) {
        return Err(Error::Lattice(format!("torus needs rows, cols >= 2, got {}x{}", spec.rows, spec.cols)));
    }
    if spec.rows < 1 || spec.cols < 1 {
        return Err(Error::Lattice("rows and cols must be >= 1".into()));
    }
    if spec.d < 2 {
        return Err(Error::InvalidDimension(spec.d));
    }
    if !torus && spec.boundary.is_none() {
        return Err(Error::Lattice("planar lattice needs boundary tags".into()));
    }
    let (h, w) = (2 * spec.rows, 2 * spec.cols);
    for (k, d) in spec.defects.iter().enumerate() {
        let r = d.region;
        if r.iter().any(|c| c % 2 != 0) || r[0] >= r[2] || r[1] >= r[3] {
            return Err(Error::Lattice(format!("defect {k}: region corners must be ordered vertices")));
        }
        if torus {
            if r[2] - r[0] >= h || r[3] - r[1] >= w {
                return Err(Error::Lattice(format!("defect {k} wraps around the torus")));
            }
        } else if r[0] == 0 || r[1] == 0 || r[2] >= h || r[3] >= w {
            return Err(Error::Lattice(format!("defect {k} touches the outer boundary")));
        }
        for (k2, d2) in spec.defects.iter().enumerate().take(k) {
            let s = d2.region;
            let overlap = r[0] <= s[2] && s[0] <= r[2] && r[1] <= s[3] && s[1] <= r[3];
            if overlap {
                return Err(Error::Lattice(format!("defects {k2} and {k} overlap")));
            }
        }
    }
    Ok(())
}

fn build_surface(spec: &LatticeSpec) -> Result<LatticeCode> {
    validate(spec)?;
    if spec.d != 2 {
        return Err(Error::Lattice("use build_zd for d > 2".into()));
    }
    let torus = spec.kind == LatticeKind::Torus;
    let (h, w) = if torus { (2 * spec.rows, 2 * spec.cols) } else { (2 * spec.rows + 1, 2 * spec.cols + 1) };
    let grid = Grid { spec, torus, h, w };

    let mut edges = Vec::new();
    for i in 0..h {
        for j in 0..w {
            if (i + j) % 2 == 1 && grid.edge_present([i, j]) {
                edges.push([i, j]);
            }
        }
    }
    let index: BTreeMap<Coord, usize> = edges.iter().enumerate().map(|(k, c)| (*c, k)).collect();
    let n = edges.len();
    let mut terms = Vec::new();

    let star_edges = |v: Coord| -> Vec<usize> {
        let (i, j) = (v[0] as isize, v[1] as isize);
        [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)]
            .iter()
            .filter_map(|&(a, b)| grid.at(a, b))
            .filter_map(|c| index.get(&c).copied())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    };

    for i in (0..h).step_by(2) {
        for j in (0..w).step_by(2) {
            let v = [i, j];
            if !grid.vertex_present(v) || grid.vertex_crossed(v) {
                continue;
            }
            let support = star_edges(v);
            if support.is_empty() {
                continue;
            }
            let (prefix, mut tag) = match support.len() {
                4 => ("A", GeometryTag::Bulk),
                3 => ("D", GeometryTag::Boundary),
                2 => ("C", GeometryTag::Corner),
                _ => ("S", GeometryTag::Boundary),
            };
            if tag != GeometryTag::Bulk && grid.near_defect(v) {
                tag = GeometryTag::Defect;
            }
            let factors: Vec<_> = support.iter().map(|&q| (q, Letter::X)).collect();
            terms.push(Term {
                label: site_label(prefix, v),
                site: v,
                tag,
                op: PauliString::from_letters(n, &factors)?,
                signs: vec![],
            });
        }
    }
    for i in (1..h).step_by(2) {
        for j in (1..w).step_by(2) {
            let p = [i, j];
            if spec.defects.iter().any(|d| d.kind == Side::Smooth && grid.in_region(p, d.region, true)) {
                continue;
            }
            let support = star_edges(p);
            if support.is_empty() {
                continue;
            }
            let (prefix, mut tag) = match support.len() {
                4 => ("B", GeometryTag::Bulk),
                3 => ("F", GeometryTag::Boundary),
                2 => ("E", GeometryTag::Corner),
                _ => ("P", GeometryTag::Boundary),
            };
            if tag != GeometryTag::Bulk && grid.near_defect(p) {
                tag = GeometryTag::Defect;
            }
            let factors: Vec<_> = support.iter().map(|&q| (q, Letter::Z)).collect();
            terms.push(Term {
                label: site_label(prefix, p),
                site: p,
                tag,
                op: PauliString::from_letters(n, &factors)?,
                signs: vec![],
            });
        }
    }
    LatticeCode::finish(spec.clone(), edges, terms)
}

/// Shor's nine-qubit code: six `ZZ` checks and two weight-6 `X` checks.
pub fn build_shor() -> StabilizerGroup {
    let n = 9;
    let zz = |a: usize| PauliString::from_letters(n, &[(a, Letter::Z), (a + 1, Letter::Z)]).unwrap();
    let xs = |a: usize| PauliString::from_letters(n, &(a..a + 6).map(|q| (q, Letter::X)).collect::<Vec<_>>()).unwrap();
    let gens = vec![zz(0), zz(1), xs(0), zz(3), zz(4), xs(3), zz(6), zz(7)];
    let labels = (1..=8).map(|k| format!("T_{k}")).collect();
    StabilizerGroup::new(n, 2, gens, labels).expect("Shor generators are valid")
}

/// D(Z_d) torus with oriented edges: horizontal edges point right,
/// vertical edges point up (towards smaller row index).
///
/// Stars carry `X` on outgoing edges and `X^dagger` on incoming ones;
/// plaquettes carry `Z` on edges along the counter-clockwise circulation
/// (bottom and right) and `Z^dagger` on the others.
pub fn build_zd(rows: usize, cols: usize, d: u32) -> Result<LatticeCode> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut spec = LatticeSpec::torus(rows, cols);
    spec.d = d;
    validate(&spec)?;
    let (h, w) = (2 * rows, 2 * cols);
    let grid = Grid { spec: &spec, torus: true, h, w };
    let mut edges = Vec::new();
    for i in 0..h {
        for j in 0..w {
            if (i + j) % 2 == 1 {
                edges.push([i, j]);
            }
        }
    }
    let index: BTreeMap<Coord, usize> = edges.iter().enumerate().map(|(k, c)| (*c, k)).collect();
    let n = edges.len();
    let q = |i: isize, j: isize| index[&grid.at(i, j).unwrap()];
    let mut terms = Vec::new();

    for i in (0..h).step_by(2) {
        for j in (0..w).step_by(2) {
            let (a, b) = (i as isize, j as isize);
            // (edge, exponent): right and up edges leave the vertex
            let legs = [(q(a, b + 1), 1), (q(a - 1, b), 1), (q(a, b - 1), d - 1), (q(a + 1, b), d - 1)];
            let mut x = vec![0; n];
            for (e, p) in legs {
                x[e] = (x[e] + p) % d;
            }
            terms.push(Term {
                label: site_label("A", [i, j]),
                site: [i, j],
                tag: GeometryTag::Bulk,
                op: PauliString::new(d, x, vec![0; n], 0)?,
                signs: vec![],
            });
        }
    }
    for i in (1..h).step_by(2) {
        for j in (1..w).step_by(2) {
            let (a, b) = (i as isize, j as isize);
            let signs = vec![(q(a + 1, b), 1), (q(a, b + 1), 1), (q(a - 1, b), -1), (q(a, b - 1), -1)];
            let mut z = vec![0; n];
            for &(e, s) in &signs {
                z[e] = (z[e] + if s > 0 { 1 } else { d - 1 }) % d;
            }
            terms.push(Term {
                label: site_label("B", [i, j]),
                site: [i, j],
                tag: GeometryTag::Bulk,
                op: PauliString::new(d, vec![0; n], z, 0)?,
                signs,
            });
        }
    }
    LatticeCode::finish(spec, edges, terms)
}

/// Parameters of the twist geometry on the medial lattice, derived from a
/// spec with a wall.
#[derive(Clone, Copy, Debug)]
struct TwistShape {
    width: usize,
    height: usize,
    x0: usize,
    y0: usize,
}

fn twist_shape(spec: &LatticeSpec) -> Result<TwistShape> {
    let wall = spec.wall.as_ref().ok_or_else(|| Error::Lattice("no wall".into()))?;
    if spec.kind != LatticeKind::Planar || spec.d != 2 || !spec.defects.is_empty() {
        return Err(Error::Lattice("twist lattices are planar qubit lattices without holes".into()));
    }
    let (height, width) = (spec.rows + 1, spec.cols + 1);
    let [y0, x0] = wall.twist_endpoint;
    if x0 < 1 || x0 + 2 > width || y0 < 1 || y0 + 3 > height {
        return Err(Error::Lattice("twist endpoint touches the boundary".into()));
    }
    let expected: Vec<Coord> = (y0 + 1..height).map(|y| [y, x0]).collect();
    if wall.path != expected {
        return Err(Error::Lattice(format!(
            "wall path must run straight from the twist at {:?} to the top edge: expected {:?}",
            wall.twist_endpoint, expected
        )));
    }
    Ok(TwistShape { width, height, x0, y0 })
}

/// The twist spec used by the `twist` preset: a 4-wide, 7-high medial patch
/// whose twist sits at row 1, column 2.
pub fn twist_preset_spec() -> LatticeSpec {
    let (y0, x0, height) = (1, 2, 7);
    LatticeSpec {
        kind: LatticeKind::Planar,
        rows: height - 1,
        cols: 3,
        boundary: Some(Boundary::all(Side::Smooth)),
        defects: vec![],
        wall: Some(Wall { path: (y0 + 1..height).map(|y| [y, x0]).collect(), twist_endpoint: [y0, x0] }),
        d: 2,
    }
}

/// Single-twist lattice.
///
/// Built as an XZZX-type surface code on the medial lattice with one column
/// of qubits removed above the twist. Faces straddling the removed column
/// merge into wall operators and the face at its end becomes the
/// five-qubit twist operator `Q`. Qubits with odd `row + col` are then
/// Hadamard-rotated, which turns every face away from the wall into a pure
/// `X` or pure `Z` check while wall faces and `Q` stay mixed.
pub fn build_twist(spec: &LatticeSpec) -> Result<LatticeCode> {
    let s = twist_shape(spec)?;
    let (w, h, x0, y0) = (s.width as isize, s.height as isize, s.x0 as isize, s.y0 as isize);
    let present = |x: isize, y: isize| x >= 0 && y >= 0 && x < w && y < h && !(x == x0 && y > y0);
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if present(x, y) {
                edges.push([y as usize, x as usize]);
            }
        }
    }
    let index: BTreeMap<Coord, usize> = edges.iter().enumerate().map(|(k, c)| (*c, k)).collect();
    let n = edges.len();
    let qi = |x: isize, y: isize| index[&[y as usize, x as usize]];

    // (kind, anchor, factors in the XZZX frame)
    let mut faces: Vec<(GeometryTag, Coord, Vec<((isize, isize), Letter)>)> = Vec::new();
    let xzzx = |c: [(isize, isize); 4]| vec![(c[0], Letter::X), (c[1], Letter::Z), (c[2], Letter::Z), (c[3], Letter::X)];
    for y in 0..h - 1 {
        for x in 0..w - 1 {
            let c = [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)];
            if c.iter().all(|&(a, b)| present(a, b)) {
                faces.push((GeometryTag::Bulk, [y as usize, x as usize], xzzx(c)));
            }
        }
    }
    for y in y0 + 1..h - 1 {
        let c = [(x0 - 1, y), (x0 + 1, y), (x0 - 1, y + 1), (x0 + 1, y + 1)];
        faces.push((GeometryTag::Wall, [y as usize, x0 as usize], xzzx(c)));
    }
    faces.push((
        GeometryTag::Twist,
        [y0 as usize, x0 as usize],
        vec![
            ((x0 - 1, y0), Letter::X),
            ((x0, y0), Letter::Y),
            ((x0 + 1, y0), Letter::Z),
            ((x0 - 1, y0 + 1), Letter::Z),
            ((x0 + 1, y0 + 1), Letter::X),
        ],
    ));
    // weight-2 boundary faces, every other one so that they commute
    let keep = |f: &[((isize, isize), Letter)]| {
        let m = f.iter().map(|((x, y), _)| (*x, *y)).min().unwrap();
        (m.0 + m.1) % 2 == 0
    };
    let mut pair = |a: (isize, isize), la: Letter, b: (isize, isize), lb: Letter| {
        if present(a.0, a.1) && present(b.0, b.1) {
            let f = vec![(a, la), (b, lb)];
            if keep(&f) {
                let anchor = [a.1.max(0) as usize, a.0.max(0) as usize];
                faces.push((GeometryTag::Boundary, anchor, f));
            }
        }
    };
    for x in -1..w {
        pair((x, 0), Letter::Z, (x + 1, 0), Letter::X);
        let yy = h - 1;
        if x == x0 && yy > y0 {
            continue;
        }
        let b = if x == x0 - 1 && yy > y0 { (x0 + 1, yy) } else { (x + 1, yy) };
        pair((x, yy), Letter::X, b, Letter::Z);
    }
    for y in -1..h {
        pair((0, y), Letter::Z, (0, y + 1), Letter::X);
        pair((w - 1, y), Letter::X, (w - 1, y + 1), Letter::Z);
    }

    let mut terms = Vec::new();
    let mut counters: BTreeMap<&str, usize> = BTreeMap::new();
    for (tag, anchor, factors) in faces {
        let rotated: Vec<(usize, Letter)> = factors
            .iter()
            .map(|&((x, y), l)| {
                let l = if (x + y) % 2 == 1 {
                    match l {
                        Letter::X => Letter::Z,
                        Letter::Z => Letter::X,
                        Letter::Y => Letter::Y,
                    }
                } else {
                    l
                };
                (qi(x, y), l)
            })
            .collect();
        let op = PauliString::from_letters(n, &rotated)?;
        let label = match tag {
            GeometryTag::Twist => "Q".to_string(),
            GeometryTag::Wall => {
                let c = counters.entry("W").or_insert(0);
                *c += 1;
                format!("W_{}", c)
            }
            _ => {
                let prefix = match (op.generator_type(), op.weight()) {
                    (GeneratorType::X, 4) => "A",
                    (GeneratorType::Z, 4) => "B",
                    (GeneratorType::X, _) => "C",
                    (GeneratorType::Z, _) => "E",
                    _ => "M",
                };
                site_label(prefix, anchor)
            }
        };
        terms.push(Term { label, site: anchor, tag, op, signs: vec![] });
    }
    LatticeCode::finish(spec.clone(), edges, terms)
}

/// Spins and generators that pin down the twist region: every mixed
/// generator, plus each pure-`X` generator touching their support. Returns
/// `(spins, generator indices)`.
pub fn twist_subsystem(group: &StabilizerGroup) -> Result<(Vec<usize>, Vec<usize>)> {
    let gens = group.generators();
    let mixed: Vec<&PauliString> = gens.iter().filter(|g| g.generator_type() == GeneratorType::Mixed).collect();
    if mixed.is_empty() {
        return Err(Error::Lattice("no mixed generators".into()));
    }
    let spins: Vec<usize> = mixed.iter().flat_map(|g| g.support()).collect::<BTreeSet<_>>().into_iter().collect();
    let chosen = (0..gens.len())
        .filter(|&j| {
            let ty = gens[j].generator_type();
            let touches = gens[j].support().iter().any(|q| spins.binary_search(q).is_ok());
            ty == GeneratorType::Mixed || (ty == GeneratorType::X && touches)
        })
        .collect();
    Ok((spins, chosen))
}

/// What a named preset builds.
#[derive(Clone, Debug)]
pub enum Preset {
    Lattice(LatticeCode),
    Group(StabilizerGroup),
}

impl Preset {
    pub fn group(&self) -> &StabilizerGroup {
        match self {
            Preset::Lattice(c) => &c.group,
            Preset::Group(g) => g,
        }
    }
}

pub const PRESETS: &[&str] = &[
    "toric RxC",
    "shor",
    "planar-smooth",
    "planar-rough",
    "planar-mixed",
    "defect-smooth",
    "defect-rough",
    "twist",
    "zd RxC d",
];

fn parse_size(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Lattice(format!("expected RxC, got {s:?}"));
    let (r, c) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?))
}

/// Spec behind a preset. `shor` has no lattice and returns `None`.
pub fn preset_spec(name: &str, args: &[String]) -> Result<Option<LatticeSpec>> {
    let want = |k: usize| {
        if args.len() == k {
            Ok(())
        } else {
            Err(Error::Lattice(format!("preset {name} takes {k} argument(s), got {}", args.len())))
        }
    };
    let spec = match name {
        "toric" => {
            want(1)?;
            let (r, c) = parse_size(&args[0])?;
            LatticeSpec::torus(r, c)
        }
        "shor" => {
            want(0)?;
            return Ok(None);
        }
        "planar-smooth" | "planar-rough" | "planar-mixed" => {
            want(0)?;
            let b = match name {
                "planar-smooth" => Boundary::all(Side::Smooth),
                "planar-rough" => Boundary::all(Side::Rough),
                _ => Boundary::mixed(),
            };
            LatticeSpec::planar(4, 4, b)
        }
        "defect-smooth" => {
            want(0)?;
            LatticeSpec::torus(4, 4).with_defect(Side::Smooth, [2, 2, 6, 6])
        }
        "defect-rough" => {
            want(0)?;
            LatticeSpec::torus(3, 5).with_defect(Side::Rough, [2, 2, 4, 8])
        }
        "twist" => {
            want(0)?;
            twist_preset_spec()
        }
        "zd" => {
            want(2)?;
            let (r, c) = parse_size(&args[0])?;
            let d = args[1].parse().map_err(|_| Error::Lattice(format!("bad d {:?}", args[1])))?;
            let mut s = LatticeSpec::torus(r, c);
            s.d = d;
            s
        }
        _ => return Err(Error::Lattice(format!("unknown preset {name:?}; known: {}", PRESETS.join(", ")))),
    };
    Ok(Some(spec))
}

pub fn preset(name: &str, args: &[String]) -> Result<Preset> {
    match preset_spec(name, args)? {
        Some(spec) => Ok(Preset::Lattice(build(&spec)?)),
        None => Ok(Preset::Group(build_shor())),
    }
}

/// Serializable description of a built lattice.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Geometry {
    pub spec: Option<LatticeSpec>,
    pub edges: Vec<Coord>,
    pub terms: Vec<GeometryTerm>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeometryTerm {
    pub label: String,
    pub site: Coord,
    pub tag: GeometryTag,
    pub support: Vec<usize>,
    pub independent: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub signs: Vec<(usize, i32)>,
}

impl LatticeCode {
    pub fn geometry(&self) -> Geometry {
        Geometry {
            spec: Some(self.spec.clone()),
            edges: self.edges.clone(),
            terms: self
                .terms
                .iter()
                .enumerate()
                .map(|(k, t)| GeometryTerm {
                    label: t.label.clone(),
                    site: t.site,
                    tag: t.tag,
                    support: t.op.support(),
                    independent: self.kept.contains(&k),
                    signs: t.signs.clone(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn support_coords(code: &LatticeCode, label: &str) -> BTreeSet<Coord> {
        code.term(label).unwrap().op.support().into_iter().map(|q| code.edges[q]).collect()
    }

    fn coords(list: &[[usize; 2]]) -> BTreeSet<Coord> {
        list.iter().copied().collect()
    }

    #[test]
    fn toric_counts() {
        let c = build_toric(2, 2).unwrap();
        assert_eq!(c.n(), 8);
        assert_eq!(c.group.len(), 6);
        assert_eq!(c.group.encoded().unwrap(), 2);
        let labels = c.group.labels();
        assert!(!labels.contains(&"A_{22}".to_string()));
        assert!(!labels.contains(&"B_{33}".to_string()));
        let c3 = build_toric(3, 3).unwrap();
        assert_eq!((c3.n(), c3.group.independent_rank().unwrap()), (18, 16));
        assert!(build_toric(1, 3).is_err());
    }

    #[test]
    fn smooth_highlighted_operators() {
        let c = build_planar(&LatticeSpec::planar(4, 4, Boundary::all(Side::Smooth))).unwrap();
        assert_eq!(support_coords(&c, "A_{44}"), coords(&[[3, 4], [5, 4], [4, 3], [4, 5]]));
        assert_eq!(support_coords(&c, "C_{08}"), coords(&[[0, 7], [1, 8]]));
        assert_eq!(support_coords(&c, "D_{04}"), coords(&[[1, 4], [0, 3], [0, 5]]));
        assert_eq!(support_coords(&c, "B_{51}"), coords(&[[4, 1], [6, 1], [5, 0], [5, 2]]));
        assert_eq!(c.group.encoded().unwrap(), 0);
    }

    #[test]
    fn rough_highlighted_operators() {
        let c = build_planar(&LatticeSpec::planar(4, 4, Boundary::all(Side::Rough))).unwrap();
        assert_eq!(support_coords(&c, "E_{17}"), coords(&[[2, 7], [1, 6]]));
        assert_eq!(support_coords(&c, "F_{57}"), coords(&[[4, 7], [6, 7], [5, 6]]));
        assert_eq!(support_coords(&c, "A_{22}"), coords(&[[1, 2], [3, 2], [2, 1], [2, 3]]));
        assert_eq!(support_coords(&c, "B_{53}"), coords(&[[4, 3], [6, 3], [5, 2], [5, 4]]));
        assert_eq!(c.n(), 24);
        assert_eq!(c.group.encoded().unwrap(), 0);
    }

    #[test]
    fn one_by_one_smooth() {
        let c = build_planar(&LatticeSpec::planar(1, 1, Boundary::all(Side::Smooth))).unwrap();
        assert_eq!(c.n(), 4);
        let stars = c.terms.iter().filter(|t| t.label.starts_with('C')).count();
        assert_eq!(stars, 4);
        assert_eq!(c.terms.len(), 5);
        // four corner stars multiply to the identity
        assert_eq!(c.hamiltonian().independent_rank().unwrap(), 4);
    }

    #[test]
    fn smooth_defect_operators() {
        let spec = LatticeSpec::torus(4, 4).with_defect(Side::Smooth, [2, 2, 6, 6]);
        let c = build_defect(&spec).unwrap();
        assert_eq!(support_coords(&c, "D_{24}"), coords(&[[1, 4], [2, 3], [2, 5]]));
        assert_eq!(support_coords(&c, "D_{42}"), coords(&[[3, 2], [5, 2], [4, 1]]));
        assert_eq!(support_coords(&c, "D_{46}"), coords(&[[3, 6], [5, 6], [4, 7]]));
        assert_eq!(support_coords(&c, "D_{64}"), coords(&[[6, 3], [6, 5], [7, 4]]));
        for v in [[2, 2], [2, 6], [6, 2], [6, 6]] {
            assert!(c.terms.iter().all(|t| t.site != v));
        }
    }

    #[test]
    fn rough_defect_operators() {
        let spec = LatticeSpec::torus(3, 5).with_defect(Side::Rough, [2, 2, 4, 8]);
        let c = build_defect(&spec).unwrap();
        assert_eq!(support_coords(&c, "F_{31}"), coords(&[[2, 1], [4, 1], [3, 0]]));
        let f = c.terms.iter().filter(|t| t.label.starts_with('F')).count();
        assert_eq!(f, 8);
        let vertices_without = (0..6).step_by(2).flat_map(|i| (0..10).step_by(2).map(move |j| [i, j]));
        let crossed = vertices_without.filter(|v| c.terms.iter().all(|t| t.site != *v)).count();
        assert_eq!(crossed, 8);
    }

    #[test]
    fn overlapping_defects_rejected() {
        let spec = LatticeSpec::torus(5, 5)
            .with_defect(Side::Smooth, [2, 2, 6, 6])
            .with_defect(Side::Rough, [4, 4, 8, 8]);
        assert!(build_defect(&spec).is_err());
    }

    #[test]
    fn shor_code() {
        let g = build_shor();
        assert_eq!(g.independent_rank().unwrap(), 8);
        assert_eq!(g.find("T_3").unwrap().support(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(g.count_incidence(GeneratorType::Z), vec![1, 2, 1, 1, 2, 1, 1, 2, 1]);
    }

    #[test]
    fn zd_plaquette_signs() {
        let c = build_zd(2, 2, 3).unwrap();
        for t in c.terms.iter().filter(|t| t.label.starts_with('B')) {
            let plus = t.signs.iter().filter(|s| s.1 > 0).count();
            assert_eq!((plus, t.signs.len()), (2, 4));
            assert_eq!(t.op.pow(3), PauliString::identity(c.n(), 3));
        }
        assert!(build_zd(2, 2, 1).is_err());
    }

    #[test]
    fn twist_preset_shape() {
        let c = build_twist(&twist_preset_spec()).unwrap();
        assert_eq!(c.n(), 23);
        let q = c.term("Q").unwrap();
        assert_eq!(q.op.weight(), 5);
        let (spins, chosen) = twist_subsystem(&c.group).unwrap();
        assert_eq!(spins.len(), 13);
        let checks = chosen.iter().map(|&j| c.group.generators()[j].restrict(&spins).unwrap()).collect();
        let sub = StabilizerGroup::from_terms(13, 2, checks, vec![]).unwrap();
        assert_eq!(sub.independent_rank().unwrap(), 13);
    }

    #[test]
    fn presets_parse() {
        assert_eq!(preset("toric", &["2x2".into()]).unwrap().group().n(), 8);
        assert_eq!(preset("shor", &[]).unwrap().group().len(), 8);
        assert_eq!(preset("zd", &["2x2".into(), "3".into()]).unwrap().group().d(), 3);
        assert!(preset("toric", &[]).is_err());
        assert!(preset("hexagon", &[]).is_err());
        for name in ["planar-smooth", "planar-rough", "planar-mixed", "defect-smooth", "defect-rough", "twist"] {
            let p = preset(name, &[]).unwrap();
            let Preset::Lattice(c) = p else { panic!() };
            assert_eq!(c.geometry().terms.len(), c.terms.len());
        }
    }

    #[test]
    fn twist_rejects_boundary_endpoint() {
        let mut spec = twist_preset_spec();
        spec.wall.as_mut().unwrap().twist_endpoint = [0, 2];
        assert!(build_twist(&spec).is_err());
    }
}
