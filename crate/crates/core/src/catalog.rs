//! Catalog of named polytopes: the width-one tetrahedra `T_{p,q}(a,b)`, the
//! four infinite families of non-spanning polytopes of width > 1, and the
//! sporadic exceptions, with deduplicated per-size enumeration and the
//! closed-form counts of isomorphism classes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::equiv::{canonical_form, CanonicalForm};
use crate::geom::{hull, point, LatticePolytope3, Point3};
use crate::intlin::{gcd_all, snf, IntMatrix};
use crate::Error;

/// Tag for a catalog polytope.
///
/// The derived order (`F1 < F2 < F3 < F4 <` exceptions) is the tie-break
/// order used to pick a representative label when one polytope admits
/// several catalog descriptions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CatalogTag {
    /// Width-one tetrahedron family `T_{p,q}(a,b)`, parameters `(p, q, a, b)`.
    T,
    /// Infinite family of index 3, parameters `(a, b)`.
    F1,
    /// Infinite family of index 2, parameters `(a, b)`, excluding `(0, 1)`.
    F2,
    /// Infinite family of index 2, parameters `(a, b, k)`, excluding `(0, 1, 1)`.
    F3,
    /// Infinite family of index 2, parameters `(a, b)`.
    F4,
    /// The exceptional polytope of size 5 and index 5.
    E55,
    /// The exceptional polytope of size 6 and index 3.
    E63,
    /// The exceptional polytope of size 7 and index 2.
    E72,
    /// First exceptional polytope of size 8 and index 2.
    E821,
    /// Second exceptional polytope of size 8 and index 2.
    E822,
    /// Third exceptional polytope of size 8 and index 2.
    E823,
    /// First spanning tetrahedron of size 5 with no unimodular tetrahedron.
    E511,
    /// Second spanning tetrahedron of size 5 with no unimodular tetrahedron.
    E512,
}

pub const EXCEPTION_TAGS: [CatalogTag; 6] = [
    CatalogTag::E55,
    CatalogTag::E63,
    CatalogTag::E72,
    CatalogTag::E821,
    CatalogTag::E822,
    CatalogTag::E823,
];

impl CatalogTag {
    pub fn label(self) -> &'static str {
        match self {
            CatalogTag::T => "T",
            CatalogTag::F1 => "F1",
            CatalogTag::F2 => "F2",
            CatalogTag::F3 => "F3",
            CatalogTag::F4 => "F4",
            CatalogTag::E55 => "E55",
            CatalogTag::E63 => "E63",
            CatalogTag::E72 => "E72",
            CatalogTag::E821 => "E821",
            CatalogTag::E822 => "E822",
            CatalogTag::E823 => "E823",
            CatalogTag::E511 => "E511",
            CatalogTag::E512 => "E512",
        }
    }

    /// Number of parameters an entry with this tag carries.
    pub fn arity(self) -> usize {
        match self {
            CatalogTag::T => 4,
            CatalogTag::F1 | CatalogTag::F2 | CatalogTag::F4 => 2,
            CatalogTag::F3 => 3,
            _ => 0,
        }
    }

    pub fn is_family(self) -> bool {
        matches!(
            self,
            CatalogTag::F1 | CatalogTag::F2 | CatalogTag::F3 | CatalogTag::F4
        )
    }

    pub fn is_exception(self) -> bool {
        EXCEPTION_TAGS.contains(&self)
    }

    /// Sublattice index of every member, when the tag determines it.
    /// `None` for `T`, whose index is the parameter `q`.
    pub fn stated_index(self) -> Option<u64> {
        match self {
            CatalogTag::T => None,
            CatalogTag::F1 | CatalogTag::E63 => Some(3),
            CatalogTag::F2 | CatalogTag::F3 | CatalogTag::F4 => Some(2),
            CatalogTag::E55 => Some(5),
            CatalogTag::E72 | CatalogTag::E821 | CatalogTag::E822 | CatalogTag::E823 => Some(2),
            CatalogTag::E511 | CatalogTag::E512 => Some(1),
        }
    }
}

impl fmt::Display for CatalogTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CatalogTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let up = s.to_ascii_uppercase();
        let tag = match up.as_str() {
            "T" => CatalogTag::T,
            "F1" => CatalogTag::F1,
            "F2" => CatalogTag::F2,
            "F3" => CatalogTag::F3,
            "F4" => CatalogTag::F4,
            "E55" => CatalogTag::E55,
            "E63" => CatalogTag::E63,
            "E72" => CatalogTag::E72,
            "E821" => CatalogTag::E821,
            "E822" => CatalogTag::E822,
            "E823" => CatalogTag::E823,
            "E511" => CatalogTag::E511,
            "E512" => CatalogTag::E512,
            _ => return Err(Error::InvalidArgument(format!("unknown catalog tag `{s}`"))),
        };
        Ok(tag)
    }
}

/// A catalog label: a tag plus its integer parameters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CatalogEntry {
    pub tag: CatalogTag,
    pub params: Vec<i64>,
}

impl CatalogEntry {
    pub fn new(tag: CatalogTag, params: Vec<i64>) -> Self {
        CatalogEntry { tag, params }
    }

    pub fn t(p: i64, q: i64, a: i64, b: i64) -> Self {
        CatalogEntry::new(CatalogTag::T, vec![p, q, a, b])
    }

    pub fn family(tag: CatalogTag, a: i64, b: i64) -> Self {
        debug_assert!(matches!(
            tag,
            CatalogTag::F1 | CatalogTag::F2 | CatalogTag::F4
        ));
        CatalogEntry::new(tag, vec![a, b])
    }

    pub fn f3(a: i64, b: i64, k: i64) -> Self {
        CatalogEntry::new(CatalogTag::F3, vec![a, b, k])
    }

    pub fn exception(tag: CatalogTag) -> Self {
        debug_assert!(tag.is_exception() || matches!(tag, CatalogTag::E511 | CatalogTag::E512));
        CatalogEntry::new(tag, Vec::new())
    }

    /// The family parameters of an F-entry, if this is one.
    pub fn family_params(&self) -> Option<FamilyParams> {
        match self.tag {
            CatalogTag::F1 | CatalogTag::F2 | CatalogTag::F4 => {
                Some(FamilyParams::new(self.params[0], self.params[1], None))
            }
            CatalogTag::F3 => Some(FamilyParams::new(
                self.params[0],
                self.params[1],
                Some(self.params[2]),
            )),
            _ => None,
        }
    }

    /// Number of lattice points of the polytope this entry describes.
    /// Meaningful only for in-domain parameters.
    pub fn size(&self) -> usize {
        match self.tag {
            CatalogTag::T => (self.params[2] + self.params[3] + 2) as usize,
            CatalogTag::F1 | CatalogTag::F2 => (self.params[1] - self.params[0] + 4) as usize,
            CatalogTag::F3 | CatalogTag::F4 => (self.params[1] - self.params[0] + 5) as usize,
            CatalogTag::E55 | CatalogTag::E511 | CatalogTag::E512 => 5,
            CatalogTag::E63 => 6,
            CatalogTag::E72 => 7,
            CatalogTag::E821 | CatalogTag::E822 | CatalogTag::E823 => 8,
        }
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.is_empty() {
            write!(f, "{}", self.tag)
        } else {
            let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
            write!(f, "{}({})", self.tag, ps.join(","))
        }
    }
}

/// Parameters of an infinite-family member, `a <= 0 < b`, with `k` present
/// exactly for F3.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyParams {
    pub a: i64,
    pub b: i64,
    pub k: Option<i64>,
}

impl FamilyParams {
    pub fn new(a: i64, b: i64, k: Option<i64>) -> Self {
        FamilyParams { a, b, k }
    }

    /// Whether these parameters are in the canonical orientation
    /// `-a <= b` (for F3, `-a <= b - k`); the mirror image of a member has
    /// the complementary orientation.
    pub fn canonical_orientation(&self) -> bool {
        -self.a <= self.b - self.k.unwrap_or(0)
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "(a={}, b={}, k={})", self.a, self.b, k),
            None => write!(f, "(a={}, b={})", self.a, self.b),
        }
    }
}

fn pt128(x: i128, y: i128, z: i128) -> Point3 {
    Point3::new(BigInt::from(x), BigInt::from(y), BigInt::from(z))
}

fn check_family_domain(entry: &CatalogEntry) -> Result<(i64, i64), Error> {
    let (a, b) = (entry.params[0], entry.params[1]);
    if !(a <= 0 && 0 < b) {
        return Err(Error::ParamDomain(format!(
            "{} requires a <= 0 < b",
            entry.tag
        )));
    }
    Ok((a, b))
}

/// Build the polytope a catalog entry describes.
///
/// Validates the parameter domain first: `T` needs `0 <= p < q`,
/// `gcd(p, q) = 1` and `a, b >= 1`; families need `a <= 0 < b` (and
/// `0 <= k <= b` for F3); the width-one members `F2(0,1)` and `F3(0,1,1)`
/// are excluded; exceptions take no parameters.
pub fn make(entry: &CatalogEntry) -> Result<LatticePolytope3, Error> {
    hull(&generators(entry)?)
}

/// The defining point list of an entry: spike endpoints plus the outer
/// points for families, the four or five frozen generators otherwise.
/// Same domain validation as `make`; the polytope is their hull.
pub fn generators(entry: &CatalogEntry) -> Result<Vec<Point3>, Error> {
    if entry.params.len() != entry.tag.arity() {
        return Err(Error::ParamDomain(format!(
            "{} takes {} parameters, got {}",
            entry.tag,
            entry.tag.arity(),
            entry.params.len()
        )));
    }
    let gens: Vec<Point3> = match entry.tag {
        CatalogTag::T => {
            let (p, q, a, b) = (
                entry.params[0],
                entry.params[1],
                entry.params[2],
                entry.params[3],
            );
            if !(0 <= p && p < q) {
                return Err(Error::ParamDomain("T requires 0 <= p < q".into()));
            }
            if p.gcd(&q) != 1 {
                return Err(Error::ParamDomain("T requires gcd(p, q) = 1".into()));
            }
            if a < 1 || b < 1 {
                return Err(Error::ParamDomain("T requires a, b >= 1".into()));
            }
            let (p, q, a, b) = (p as i128, q as i128, a as i128, b as i128);
            vec![
                pt128(0, 0, 0),
                pt128(a, 0, 0),
                pt128(0, 0, 1),
                pt128(b * p, b * q, 1),
            ]
        }
        CatalogTag::F1 => {
            let (a, b) = check_family_domain(entry)?;
            vec![
                point(0, 0, a),
                point(0, 0, b),
                point(-1, -1, 0),
                point(2, -1, 1),
                point(-1, 2, -1),
            ]
        }
        CatalogTag::F2 => {
            let (a, b) = check_family_domain(entry)?;
            if (a, b) == (0, 1) {
                return Err(Error::ParamDomain(
                    "F2(0,1) has width one and is excluded".into(),
                ));
            }
            vec![
                point(0, 0, a),
                point(0, 0, b),
                point(-1, -1, 1),
                point(1, -1, 0),
                point(-1, 1, 0),
            ]
        }
        CatalogTag::F3 => {
            let (a, b) = check_family_domain(entry)?;
            let k = entry.params[2];
            if !(0 <= k && k <= b) {
                return Err(Error::ParamDomain("F3 requires 0 <= k <= b".into()));
            }
            if (a, b, k) == (0, 1, 1) {
                return Err(Error::ParamDomain(
                    "F3(0,1,1) has width one and is excluded".into(),
                ));
            }
            vec![
                point(0, 0, a),
                point(0, 0, b),
                point(-1, -1, 1),
                point(1, -1, 0),
                point(-1, 1, 0),
                pt128(1, 1, 2 * k as i128 - 1),
            ]
        }
        CatalogTag::F4 => {
            let (a, b) = check_family_domain(entry)?;
            vec![
                point(0, 0, a),
                point(0, 0, b),
                point(-1, -1, 1),
                point(1, -1, 0),
                point(-1, 1, 0),
                point(3, -1, -1),
            ]
        }
        CatalogTag::E55 => vec![
            point(0, -2, 1),
            point(1, 0, -1),
            point(1, 1, 1),
            point(-2, 1, -1),
        ],
        CatalogTag::E63 => vec![
            point(1, 0, 0),
            point(-1, -1, 0),
            point(1, 2, 3),
            point(-1, 1, -3),
        ],
        CatalogTag::E72 => vec![
            point(-1, -1, 0),
            point(2, 0, 0),
            point(1, 2, 0),
            point(0, -1, 2),
        ],
        CatalogTag::E821 => vec![
            point(-1, -1, 0),
            point(2, 0, 0),
            point(1, 2, 0),
            point(0, -1, 2),
            point(0, 1, -2),
        ],
        CatalogTag::E822 => vec![
            point(-1, -1, 0),
            point(2, 0, 0),
            point(1, 2, 0),
            point(0, -1, 2),
            point(-2, -1, -2),
        ],
        CatalogTag::E823 => vec![
            point(0, -1, -1),
            point(2, 0, 2),
            point(1, 2, -1),
            point(-1, 1, 2),
        ],
        CatalogTag::E511 => vec![
            point(1, 0, 0),
            point(0, 0, 1),
            point(2, 7, 1),
            point(-1, -2, -1),
        ],
        CatalogTag::E512 => vec![
            point(1, 0, 0),
            point(0, 0, 1),
            point(3, 7, 1),
            point(-2, -3, -1),
        ],
    };
    Ok(gens)
}

fn entry_canonical_orientation(entry: &CatalogEntry) -> bool {
    entry
        .family_params()
        .map_or(true, |p| p.canonical_orientation())
}

/// All in-domain members of one family with the given size, undeduplicated.
fn family_candidates(tag: CatalogTag, n: usize) -> Vec<CatalogEntry> {
    let delta = match tag {
        CatalogTag::F1 | CatalogTag::F2 => n as i64 - 4,
        CatalogTag::F3 | CatalogTag::F4 => n as i64 - 5,
        _ => unreachable!("family_candidates called with non-family tag"),
    };
    let mut out = Vec::new();
    if delta < 1 {
        return out;
    }
    for j in 0..delta {
        let (a, b) = (-j, delta - j);
        match tag {
            CatalogTag::F1 => out.push(CatalogEntry::family(tag, a, b)),
            CatalogTag::F2 => {
                if (a, b) != (0, 1) {
                    out.push(CatalogEntry::family(tag, a, b));
                }
            }
            CatalogTag::F4 => out.push(CatalogEntry::family(tag, a, b)),
            CatalogTag::F3 => {
                for k in 0..=b {
                    if (a, b, k) != (0, 1, 1) {
                        out.push(CatalogEntry::f3(a, b, k));
                    }
                }
            }
            _ => unreachable!(),
        }
    }
    out
}

fn exceptions_of_size(n: usize) -> Vec<CatalogEntry> {
    EXCEPTION_TAGS
        .iter()
        .filter(|t| CatalogEntry::exception(**t).size() == n)
        .map(|t| CatalogEntry::exception(*t))
        .collect()
}

/// Raw (entry, canonical form) pairs for every width > 1 non-spanning
/// candidate of size `n`, before deduplication.
fn candidates_with_forms(n: usize) -> Vec<(CatalogEntry, CanonicalForm)> {
    let mut entries = Vec::new();
    for tag in [CatalogTag::F1, CatalogTag::F2, CatalogTag::F3, CatalogTag::F4] {
        entries.extend(family_candidates(tag, n));
    }
    entries.extend(exceptions_of_size(n));
    entries
        .into_iter()
        .map(|e| {
            let p = make(&e).expect("generated entry is in domain");
            let cf = canonical_form(&p);
            (e, cf)
        })
        .collect()
}

fn dedup_representatives(
    raw: Vec<(CatalogEntry, CanonicalForm)>,
) -> Vec<(CatalogEntry, CanonicalForm)> {
    let mut groups: BTreeMap<CanonicalForm, Vec<CatalogEntry>> = BTreeMap::new();
    for (e, cf) in raw {
        groups.entry(cf).or_default().push(e);
    }
    let mut out: Vec<(CatalogEntry, CanonicalForm)> = groups
        .into_iter()
        .map(|(cf, members)| {
            let rep = members
                .into_iter()
                .min_by_key(|e| (e.tag, !entry_canonical_orientation(e), e.params.clone()))
                .expect("group is nonempty");
            (rep, cf)
        })
        .collect();
    out.sort_by(|x, y| (x.0.tag, &x.0.params).cmp(&(y.0.tag, &y.0.params)));
    out
}

fn enumeration_cache() -> &'static Mutex<HashMap<usize, Arc<Vec<(CatalogEntry, CanonicalForm)>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(CatalogEntry, CanonicalForm)>>>>> =
        OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn enumerate_nonspanning_shared(n: usize) -> Arc<Vec<(CatalogEntry, CanonicalForm)>> {
    let mut cache = enumeration_cache().lock().expect("enumeration cache poisoned");
    cache
        .entry(n)
        .or_insert_with(|| Arc::new(dedup_representatives(candidates_with_forms(n))))
        .clone()
}

/// Every non-spanning polytope of width > 1 and size `n`, up to unimodular
/// equivalence: the family members plus the exceptions of that size,
/// deduplicated by canonical form. Each class is listed once, labeled by
/// its representative entry (smallest tag, canonical orientation first).
///
/// Width-one polytopes are not included; see [`enumerate_width_one`].
pub fn enumerate_nonspanning(n: usize) -> Vec<(CatalogEntry, CanonicalForm)> {
    enumerate_nonspanning_shared(n).as_ref().clone()
}

fn mod_inverse(p: i64, q: i64) -> i64 {
    let eg = p.extended_gcd(&q);
    debug_assert_eq!(eg.gcd, 1);
    eg.x.rem_euclid(q)
}

/// Canonical representative of the set of shear parameters `p` describing
/// one tetrahedron `T_{p,q}(a,b)`: `p` and `q - p` always give isomorphic
/// tetrahedra, and when `a = b` so do the inverses of both mod `q`. The
/// largest member of the orbit is the canonical one.
pub fn canonical_shear(p: i64, q: i64, symmetric: bool) -> i64 {
    if q == 1 {
        return 0;
    }
    let p = p.rem_euclid(q);
    let mut orbit = vec![p, (q - p) % q];
    if symmetric {
        let inv = mod_inverse(p, q);
        orbit.push(inv);
        orbit.push((q - inv) % q);
    }
    orbit.into_iter().max().expect("orbit is nonempty")
}

/// All width-one tetrahedra `T_{p,q}(a,b)` of size `n` with the given
/// index `q`, one label per isomorphism class (`a >= b`, canonical `p`).
/// The list over all `q` is infinite, which is why `q` is a filter here.
pub fn enumerate_width_one(n: usize, q: i64) -> Result<Vec<CatalogEntry>, Error> {
    if q < 1 {
        return Err(Error::InvalidArgument(format!(
            "index filter must be >= 1, got {q}"
        )));
    }
    let mut out = Vec::new();
    if n < 4 {
        return Ok(out);
    }
    let s = n as i64 - 2;
    for a in (s + 1) / 2..=s - 1 {
        let b = s - a;
        let mut reps = BTreeSet::new();
        for p in 0..q {
            if p.gcd(&q) == 1 {
                reps.insert(canonical_shear(p, q, a == b));
            }
        }
        for p in reps {
            out.push(CatalogEntry::t(p, q, a, b));
        }
    }
    out.sort_by_key(|e| (e.params[2], e.params[0]));
    Ok(out)
}

/// Number of non-spanning polytopes of size `n` and index `q`, up to
/// equivalence, by the closed forms valid for `n >= 9`:
/// `floor((n-3)(n+1)/4)` for index 2, `ceil((n-3)/2)` for index 3, and
/// none of larger index.
pub fn count_closed_form(n: usize, q: u64) -> Result<u64, Error> {
    if n < 9 {
        return Err(Error::InvalidArgument(format!(
            "closed-form counts hold for size >= 9, got {n}"
        )));
    }
    if q < 2 {
        return Err(Error::InvalidArgument(
            "closed-form counts are for index >= 2".into(),
        ));
    }
    let n = n as u64;
    Ok(match q {
        2 => (n - 3) * (n + 1) / 4,
        3 => (n - 2) / 2,
        _ => 0,
    })
}

/// One cell of the family-counts table: the count obtained by actual
/// deduplicated enumeration next to the closed-form prediction (`None`
/// where the family has no members of that size at all).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountCell {
    pub enumerated: usize,
    pub formula: Option<usize>,
}

impl CountCell {
    /// True for the cells where the closed form overcounts because one of
    /// the configurations it counts has width one.
    pub fn starred(&self) -> bool {
        self.formula.map_or(false, |f| f != self.enumerated)
    }
}

/// One row of the family-counts table.
///
/// Per-family cells are deduplicated within the family only; the
/// per-index totals deduplicate across families as well, so at sizes 6
/// and 7 the index-2 total is smaller than the sum of the F2, F3, F4
/// cells. Exceptions are not included in these totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCountsRow {
    pub n: usize,
    pub f1: CountCell,
    pub f2: CountCell,
    pub f3: CountCell,
    pub f4: CountCell,
    pub total_index2: CountCell,
    pub total_index3: CountCell,
}

fn ceil_div(n: usize, d: usize) -> usize {
    (n + d - 1) / d
}

/// The family-counts table for sizes `5..=nmax`: per-family class counts
/// and per-index family totals, each computed both by enumeration and by
/// the closed forms.
pub fn family_counts_table(nmax: usize) -> Result<Vec<FamilyCountsRow>, Error> {
    if nmax < 5 {
        return Err(Error::InvalidArgument(format!(
            "family counts start at size 5, got nmax = {nmax}"
        )));
    }
    let mut rows = Vec::new();
    for n in 5..=nmax {
        let mut per_family: BTreeMap<CatalogTag, usize> = BTreeMap::new();
        let mut index2_forms: BTreeSet<CanonicalForm> = BTreeSet::new();
        let mut index3_forms: BTreeSet<CanonicalForm> = BTreeSet::new();
        for tag in [CatalogTag::F1, CatalogTag::F2, CatalogTag::F3, CatalogTag::F4] {
            let mut family_forms = BTreeSet::new();
            for entry in family_candidates(tag, n) {
                let p = make(&entry).expect("generated entry is in domain");
                let cf = canonical_form(&p);
                family_forms.insert(cf.clone());
                if tag == CatalogTag::F1 {
                    index3_forms.insert(cf);
                } else {
                    index2_forms.insert(cf);
                }
            }
            per_family.insert(tag, family_forms.len());
        }
        let half = ceil_div(n - 3, 2);
        let row = FamilyCountsRow {
            n,
            f1: CountCell {
                enumerated: per_family[&CatalogTag::F1],
                formula: Some(half),
            },
            f2: CountCell {
                enumerated: per_family[&CatalogTag::F2],
                formula: Some(half),
            },
            f3: CountCell {
                enumerated: per_family[&CatalogTag::F3],
                formula: (n >= 6).then(|| (n - 3) * (n - 3) / 4),
            },
            f4: CountCell {
                enumerated: per_family[&CatalogTag::F4],
                formula: (n >= 6).then(|| (n - 3) / 2),
            },
            total_index2: CountCell {
                enumerated: index2_forms.len(),
                // Like its F3/F4 summands, the index-2 closed form is
                // claimed from size 6 on.
                formula: (n >= 6).then(|| (n - 3) * (n + 1) / 4),
            },
            total_index3: CountCell {
                enumerated: index3_forms.len(),
                formula: Some(half),
            },
        };
        rows.push(row);
    }
    Ok(rows)
}

/// The 4-dimensional counterexample: a lattice 4-simplex with six lattice
/// points (five vertices plus the origin, interior to one facet) whose
/// empty 4-simplices have volumes 4, 2, 2, 2 while the configuration has
/// index 2. In dimension 3 every empty tetrahedron of a non-spanning
/// polytope has volume equal to the index; here one volume differs.
#[derive(Debug, Clone)]
pub struct Dim4Report {
    pub vertices: [[i64; 4]; 5],
    /// Absolute values of the nonzero 4x4 vertex minors, descending.
    pub minors: Vec<BigInt>,
    pub minor_gcd: BigInt,
    pub index: BigInt,
    pub all_volumes_equal_index: bool,
}

pub fn dim4_example() -> Dim4Report {
    let vertices: [[i64; 4]; 5] = [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [-2, -1, -1, 0],
        [1, 1, 1, 2],
    ];
    let mut minors = Vec::new();
    for skip in 0..vertices.len() {
        let rows: Vec<&[i64]> = vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, r)| r.as_slice())
            .collect();
        let d = IntMatrix::from_i64_rows(&rows)
            .det()
            .expect("4x4 minor is square");
        if d != BigInt::from(0) {
            minors.push(if d < BigInt::from(0) { -d } else { d });
        }
    }
    minors.sort();
    minors.reverse();
    let all_rows: Vec<&[i64]> = vertices.iter().map(|r| r.as_slice()).collect();
    let index = snf(&IntMatrix::from_i64_rows(&all_rows))
        .divisors()
        .into_iter()
        .fold(BigInt::one(), |acc, d| acc * d);
    let minor_gcd = gcd_all(minors.iter()).expect("minor list is nonempty");
    let all_volumes_equal_index = minors.iter().all(|m| *m == index);
    Dim4Report {
        vertices,
        minors,
        minor_gcd,
        index,
        all_volumes_equal_index,
    }
}
