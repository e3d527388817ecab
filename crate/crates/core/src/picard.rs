//! The Picard lattice of the split quintic del Pezzo surface, its ten
//! lines, the configuration symmetries, and chamber normalization.
//!
//! Line indices are fixed throughout the crate:
//! `0..4` are `E1..E4`, then `L12, L13, L14, L23, L24, L34`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PicardError {
    #[error("cannot parse class {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("pairings {0:?} do not come from a class")]
    InconsistentPairings([i64; 10]),
    #[error("class {0} pairs negatively with a line")]
    NotInEffDual(CurveClass),
}

pub const E1: usize = 0;
pub const E2: usize = 1;
pub const E3: usize = 2;
pub const E4: usize = 3;
pub const L12: usize = 4;
pub const L13: usize = 5;
pub const L14: usize = 6;
pub const L23: usize = 7;
pub const L24: usize = 8;
pub const L34: usize = 9;

pub const LINE_LABELS: [&str; 10] = ["1", "2", "3", "4", "12", "13", "14", "23", "24", "34"];

/// Index sets of the lines; `E_i` is `{i}`, `L_ij` is `{i, j}`.
const LINE_SETS: [&[usize]; 10] = [
    &[1],
    &[2],
    &[3],
    &[4],
    &[1, 2],
    &[1, 3],
    &[1, 4],
    &[2, 3],
    &[2, 4],
    &[3, 4],
];

/// Index of `L_ij`, either order.
pub fn l_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    match (i, j) {
        (1, 2) => L12,
        (1, 3) => L13,
        (1, 4) => L14,
        (2, 3) => L23,
        (2, 4) => L24,
        (3, 4) => L34,
        _ => panic!("no line L{i}{j}"),
    }
}

/// Whether two distinct lines intersect.
pub fn lines_meet(x: usize, y: usize) -> bool {
    if x == y {
        return false;
    }
    let (a, b) = (LINE_SETS[x], LINE_SETS[y]);
    match (a.len(), b.len()) {
        (1, 1) => false,
        (1, 2) => b.contains(&a[0]),
        (2, 1) => a.contains(&b[0]),
        _ => a.iter().all(|i| !b.contains(i)),
    }
}

/// Divisor or curve class `a H + c1 E1 + ... + c4 E4`, stored as
/// `[a, c1, c2, c3, c4]`. The pairing identifies the two notions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveClass(pub [i64; 5]);

impl CurveClass {
    pub fn zero() -> Self {
        CurveClass([0; 5])
    }

    pub fn h() -> Self {
        CurveClass([1, 0, 0, 0, 0])
    }

    /// `E_i` for `i` in `1..=4`.
    pub fn e(i: usize) -> Self {
        let mut v = [0; 5];
        v[i] = 1;
        CurveClass(v)
    }

    pub fn anticanonical() -> Self {
        CurveClass([3, -1, -1, -1, -1])
    }

    pub fn line(idx: usize) -> Self {
        let set = LINE_SETS[idx];
        if set.len() == 1 {
            CurveClass::e(set[0])
        } else {
            let mut v = [1, 0, 0, 0, 0];
            v[set[0]] = -1;
            v[set[1]] = -1;
            CurveClass(v)
        }
    }

    pub fn coeffs(&self) -> [i64; 5] {
        self.0
    }

    pub fn add(&self, other: &CurveClass) -> CurveClass {
        CurveClass(std::array::from_fn(|i| self.0[i] + other.0[i]))
    }

    pub fn scale(&self, m: i64) -> CurveClass {
        CurveClass(self.0.map(|x| m * x))
    }

    /// Intersection pairing, signature `(1, -1, -1, -1, -1)` in the basis
    /// `H, E1..E4`.
    pub fn pairing(&self, other: &CurveClass) -> i64 {
        self.0[0] * other.0[0] - (1..5).map(|i| self.0[i] * other.0[i]).sum::<i64>()
    }

    pub fn degree_data(&self) -> DegreeData {
        let lines: [i64; 10] = std::array::from_fn(|l| self.pairing(&CurveClass::line(l)));
        let d = self.pairing(&CurveClass::anticanonical());
        let data = DegreeData::from_lines(lines);
        debug_assert_eq!(data.d, d, "pentagon relation");
        data
    }

    pub fn in_eff_dual(&self) -> bool {
        self.degree_data().lines.iter().all(|&x| x >= 0)
    }

    /// The class with the given ten line pairings.
    pub fn from_pairings(lines: [i64; 10]) -> Result<CurveClass, PicardError> {
        let a = lines[L12] + lines[E1] + lines[E2];
        let class = CurveClass([a, -lines[E1], -lines[E2], -lines[E3], -lines[E4]]);
        if class.degree_data().lines == lines {
            Ok(class)
        } else {
            Err(PicardError::InconsistentPairings(lines))
        }
    }

    /// The class whose line pairings are `data[perm[l]]`.
    pub fn relabel(&self, perm: &Symmetry) -> CurveClass {
        CurveClass::from_pairings(self.degree_data().relabel(perm).lines)
            .expect("configuration symmetries are lattice isometries")
    }

    pub fn chamber_normalize(&self) -> Result<Chamber, PicardError> {
        if !self.in_eff_dual() {
            return Err(PicardError::NotInEffDual(*self));
        }
        let data = self.degree_data();
        for (id, perm) in symmetries().iter().enumerate() {
            let rel = data.relabel(perm);
            if rel.is_normalized() {
                return Ok(Chamber { id, perm: *perm, data: rel });
            }
        }
        unreachable!("every effective-dual class lies in some chamber")
    }

    /// Minimum pairing with a line.
    pub fn boundary_distance(&self) -> Result<i64, PicardError> {
        if !self.in_eff_dual() {
            return Err(PicardError::NotInEffDual(*self));
        }
        Ok(*self.degree_data().lines.iter().min().expect("ten lines"))
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.0;
        write!(f, "{},{},{},{},{}", v[0], v[1], v[2], v[3], v[4])
    }
}

fn parse_ints<const N: usize>(input: &str, body: &str) -> Result<[i64; N], PicardError> {
    let err = |reason: String| PicardError::Parse { input: input.to_string(), reason };
    let parts: Vec<&str> = body.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(err(format!("expected {N} comma-separated integers, got {}", parts.len())));
    }
    let mut out = [0i64; N];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|e| err(format!("{p:?}: {e}")))?;
    }
    Ok(out)
}

impl FromStr for CurveClass {
    type Err = PicardError;

    /// `a,c1,c2,c3,c4` or `pairings=d1,d2,d3,d4,d12,d13,d14,d23,d24,d34`.
    fn from_str(s: &str) -> Result<Self, PicardError> {
        let s = s.trim();
        match s.strip_prefix("pairings=") {
            Some(body) => CurveClass::from_pairings(parse_ints::<10>(s, body)?),
            None => Ok(CurveClass(parse_ints::<5>(s, s)?)),
        }
    }
}

/// The ten line pairings and the anticanonical degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DegreeData {
    pub lines: [i64; 10],
    pub d: i64,
}

impl DegreeData {
    /// Reconstructs `d` from a pentagon of lines.
    pub fn from_lines(lines: [i64; 10]) -> Self {
        let d = lines[L13] + lines[E3] + lines[L34] + lines[E4] + lines[L24];
        DegreeData { lines, d }
    }

    /// `d_i` for `i` in `1..=4`.
    pub fn di(&self, i: usize) -> i64 {
        self.lines[i - 1]
    }

    pub fn dij(&self, i: usize, j: usize) -> i64 {
        self.lines[l_index(i, j)]
    }

    pub fn relabel(&self, perm: &Symmetry) -> DegreeData {
        DegreeData { lines: std::array::from_fn(|l| self.lines[perm[l]]), d: self.d }
    }

    /// The chamber conditions.
    pub fn is_normalized(&self) -> bool {
        let l = &self.lines;
        let min_all = *l.iter().min().expect("ten lines");
        let min_far = [E2, E3, E4, L23, L24, L34].iter().map(|&i| l[i]).min().expect("six lines");
        l[E1] <= l[E2]
            && l[E2] <= l[E3]
            && l[E3] <= l[E4]
            && l[E2] <= l[L34]
            && l[E1] == min_all
            && l[E2] == min_far
    }
}

/// A permutation of the ten line indices preserving the intersection graph.
pub type Symmetry = [usize; 10];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chamber {
    pub id: usize,
    pub perm: Symmetry,
    pub data: DegreeData,
}

/// All 120 automorphisms of the line configuration, lexicographic.
pub fn symmetries() -> &'static [Symmetry] {
    static SYMS: OnceLock<Vec<Symmetry>> = OnceLock::new();
    SYMS.get_or_init(|| {
        let mut out = Vec::new();
        let mut perm = [usize::MAX; 10];
        let mut used = [false; 10];
        extend(0, &mut perm, &mut used, &mut out);
        out
    })
}

fn extend(pos: usize, perm: &mut Symmetry, used: &mut [bool; 10], out: &mut Vec<Symmetry>) {
    if pos == 10 {
        out.push(*perm);
        return;
    }
    for img in 0..10 {
        if used[img] || (0..pos).any(|k| lines_meet(k, pos) != lines_meet(perm[k], img)) {
            continue;
        }
        perm[pos] = img;
        used[img] = true;
        extend(pos + 1, perm, used, out);
        used[img] = false;
    }
    perm[pos] = usize::MAX;
}
