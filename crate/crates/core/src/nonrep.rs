//! Non-representability certificates: a finite partition of the atoms into
//! monochromatic blocks with `(B;B)·B = 0`, the coarse composition table of
//! the blocks, and two flags recording the finite/infinite tension. Every
//! field is re-derivable from the spec parameters, which is what
//! [`check_certificate`] does.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::blowup::{
    alpha_of_graph, f_l_mu, AlphaSpec, AtomStructureSpec, BlurSpec, GraphScheme, SpecParams, SymbolicAtom, Truncation,
};
use crate::error::{Error, Result};
use crate::finite_ra::{default_atom_names, FiniteAtomStructure, IDENTITY};
use crate::graphs::{chromatic_number, independent_partition, Coloring, Graph};
use crate::symbolic::{check_blur_conditions, BlurReport, CoarseBlock};

#[derive(Debug, thiserror::Error)]
pub enum CertificateError {
    #[error("malformed certificate: {0}")]
    Malformed(String),

    #[error("certificate was written by version {found}, this is version {expected}")]
    VersionMismatch { found: String, expected: String },

    #[error("re-verification of `{field}` failed{}: {detail}", at_block(.block))]
    Reverification {
        field: String,
        block: Option<usize>,
        detail: String,
    },

    #[error("checksum mismatch: recorded {recorded}, computed {computed}")]
    Checksum { recorded: String, computed: String },
}

fn at_block(block: &Option<usize>) -> String {
    block.map(|b| format!(" at block {b}")).unwrap_or_default()
}

fn reverify(field: &str, block: Option<usize>, detail: impl Into<String>) -> CertificateError {
    CertificateError::Reverification {
        field: field.into(),
        block,
        detail: detail.into(),
    }
}

/// What the certificate was computed from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifiedSpec {
    pub params: SpecParams,
    /// The coloring of the finite window, for `α(G)`. A clique-copies scheme
    /// is colored periodically: node `v` gets the color of `v mod window`.
    pub coloring: Option<Vec<usize>>,
    pub truncation: Truncation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoZeroVerdict {
    pub block: usize,
    pub zero: bool,
}

/// `left ; right` meets exactly the blocks in `result`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoarseEntry {
    pub left: CoarseBlock,
    pub right: CoarseBlock,
    pub result: BTreeSet<CoarseBlock>,
}

pub type CoarseTable = Vec<CoarseEntry>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFlags {
    /// The carrier (rows, or graph nodes) is unbounded.
    pub infinite_carrier: bool,
    /// The blocks are finitely many, non-identity ones are all mono-zero, and
    /// they partition every truncation checked.
    pub finite_partition: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonRepCertificate {
    pub spec: CertifiedSpec,
    pub blocks: Vec<CoarseBlock>,
    /// One verdict per non-identity block.
    pub mono_zero: Vec<MonoZeroVerdict>,
    pub coarse_table: CoarseTable,
    pub flags: CertificateFlags,
    pub tool_version: String,
    pub seed: u64,
    /// SHA-256 of the compact JSON of the certificate with this field empty.
    pub checksum: String,
}

impl NonRepCertificate {
    fn compute_checksum(&self) -> String {
        let mut body = self.clone();
        body.checksum.clear();
        let bytes = serde_json::to_vec(&body).expect("certificates serialize");
        hex::encode(Sha256::digest(&bytes))
    }

    /// Pretty JSON followed by a newline; byte-stable for fixed inputs.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificates serialize");
        s.push('\n');
        s
    }
}

pub fn monochromatic(b: &CoarseBlock) -> bool {
    match b {
        CoarseBlock::Id | CoarseBlock::Base { .. } | CoarseBlock::Color { .. } => true,
        CoarseBlock::BaseUnion { bases } => bases.len() <= 1,
    }
}

/// The window graph a coloring of an `α` spec covers.
fn coloring_window(spec: &AlphaSpec, c: &Coloring) -> Result<Graph> {
    match &spec.scheme {
        GraphScheme::CliqueCopies { clique_size } => {
            let n = c.assignment.len();
            if n == 0 || n % clique_size != 0 {
                return Err(Error::ImproperColoring(format!(
                    "a coloring of clique copies must cover whole cliques of size {clique_size}, got {n} nodes"
                )));
            }
            Ok(spec.scheme.window(n / clique_size))
        }
        GraphScheme::Finite(g) => Ok(g.clone()),
    }
}

/// `{Id} ∪ {(C_j, k) : j < N, k < n}` for the color classes `C_j` of `c`.
pub fn build_partition(spec: &AlphaSpec, c: &Coloring) -> Result<Vec<CoarseBlock>> {
    let window = coloring_window(spec, c)?;
    let classes = independent_partition(&window, c)?;
    let mut blocks = vec![CoarseBlock::Id];
    for nodes in classes {
        for color in 0..spec.colors {
            blocks.push(CoarseBlock::Color { nodes: nodes.clone(), color });
        }
    }
    Ok(blocks)
}

/// `{Id} ∪ {H^P : P ∈ I}`.
pub fn base_partition(spec: &BlurSpec) -> Vec<CoarseBlock> {
    std::iter::once(CoarseBlock::Id)
        .chain((0..spec.base_count()).map(|base| CoarseBlock::Base { base }))
        .collect()
}

/// The atoms of `b` inside the truncation `t`.
fn block_atoms(spec: &AtomStructureSpec, b: &CoarseBlock, t: &Truncation) -> Result<Vec<SymbolicAtom>> {
    let bad = || Error::InvalidParameter(format!("block {b:?} does not belong to this kind of structure"));
    match (spec, b) {
        (_, CoarseBlock::Id) => Ok(vec![SymbolicAtom::Identity]),
        (AtomStructureSpec::Blur(s), CoarseBlock::Base { base }) => blur_block_atoms(s, &[*base].into(), t.depth),
        (AtomStructureSpec::Blur(s), CoarseBlock::BaseUnion { bases }) => blur_block_atoms(s, bases, t.depth),
        (AtomStructureSpec::Alpha(a), CoarseBlock::Color { nodes, color }) => {
            if *color >= a.colors || nodes.iter().any(|&v| !a.scheme.contains_node(v)) {
                return Err(bad());
            }
            Ok(nodes.iter().map(|&node| SymbolicAtom::Graph { node, color: *color }).collect())
        }
        _ => Err(bad()),
    }
}

fn blur_block_atoms(s: &BlurSpec, bases: &BTreeSet<usize>, depth: u32) -> Result<Vec<SymbolicAtom>> {
    if bases.iter().any(|&p| p >= s.base_count()) {
        return Err(Error::InvalidParameter(format!("base out of range in {bases:?}")));
    }
    Ok(s.atoms_below(depth)
        .into_iter()
        .filter(|a| matches!(a, SymbolicAtom::Blur { base, .. } if bases.contains(base)))
        .collect())
}

/// The symbolic verdict: no consistent triple lies inside `b`.
fn mono_zero_symbolic(spec: &AtomStructureSpec, b: &CoarseBlock) -> Result<bool> {
    match (spec, b) {
        (_, CoarseBlock::Id) => Ok(false),
        (AtomStructureSpec::Blur(s), CoarseBlock::Base { base }) => Ok(blur_block_zero(s, &[*base].into())),
        (AtomStructureSpec::Blur(s), CoarseBlock::BaseUnion { bases }) => Ok(blur_block_zero(s, bases)),
        // one color: consistent only with an edge among the three nodes
        (AtomStructureSpec::Alpha(a), CoarseBlock::Color { nodes, .. }) => {
            Ok(nodes.iter().all(|&u| nodes.iter().all(|&v| !a.scheme.adjacent(u, v))))
        }
        _ => Err(Error::InvalidParameter(format!("block {b:?} does not belong to this kind of structure"))),
    }
}

fn blur_block_zero(s: &BlurSpec, bases: &BTreeSet<usize>) -> bool {
    // rows can always be chosen equal, so the base condition alone decides
    // the evenly-distributed branch
    let base_hit = bases
        .iter()
        .any(|&p| bases.iter().any(|&q| bases.iter().any(|&r| s.base_cond(p, q, r))));
    let touching: Vec<usize> = (0..s.blur_count())
        .filter(|&w| bases.iter().any(|&p| s.blur(w).contains(p)))
        .collect();
    let disjoint_hit = touching
        .iter()
        .any(|&x| touching.iter().any(|&y| touching.iter().any(|&z| s.disjoint(x, y, z))));
    !base_hit && !disjoint_hit
}

/// A consistent triple inside `b` among the atoms of the truncation `t`.
pub fn mono_zero_witness(spec: &AtomStructureSpec, b: &CoarseBlock, t: &Truncation) -> Result<Option<[SymbolicAtom; 3]>> {
    let atoms = block_atoms(spec, b, t)?;
    Ok(atoms.par_iter().find_map_first(|&x| {
        for &y in &atoms {
            for &z in &atoms {
                if spec.consistent(x, y, z) {
                    return Some([x, y, z]);
                }
            }
        }
        None
    }))
}

/// `(b;b)·b = 0`, decided symbolically and confirmed by enumeration at `t`.
/// A disagreement between the two is reported as an error.
pub fn verify_mono_zero(spec: &AtomStructureSpec, b: &CoarseBlock, t: &Truncation) -> Result<bool> {
    let symbolic = mono_zero_symbolic(spec, b)?;
    let witness = mono_zero_witness(spec, b, t)?;
    match (symbolic, witness) {
        (true, Some(w)) => Err(Error::CheckFailed(format!(
            "block {b:?} is symbolically mono-zero but ({}, {}, {}) is consistent",
            w[0], w[1], w[2]
        ))),
        // a truncation too small to exhibit a witness is not a disagreement
        (zero, _) => Ok(zero),
    }
}

/// `H^P ; H^Q` for base atoms, computed from the base rule: `H^R` is included
/// when some cells over `P, Q, R` are consistent, and the identity block when
/// `P = Q`.
pub fn coarse_embedding_table(spec: &BlurSpec) -> CoarseTable {
    let k = spec.base_count();
    let blurs_with = |p: usize| -> Vec<usize> { (0..spec.blur_count()).filter(|&w| spec.blur(w).contains(p)).collect() };
    let by_base: Vec<Vec<usize>> = (0..k).map(blurs_with).collect();
    let mut table = Vec::with_capacity(k * k);
    for p in 0..k {
        for q in 0..k {
            let mut result = BTreeSet::new();
            if p == q {
                result.insert(CoarseBlock::Id);
            }
            for r in 0..k {
                let disjoint = by_base[p].iter().any(|&s| {
                    by_base[q].iter().any(|&z| by_base[r].iter().any(|&w| spec.disjoint(s, z, w)))
                });
                if spec.base_cond(r, p, q) || disjoint {
                    result.insert(CoarseBlock::Base { base: r });
                }
            }
            table.push(CoarseEntry {
                left: CoarseBlock::Base { base: p },
                right: CoarseBlock::Base { base: q },
                result,
            });
        }
    }
    table
}

/// The table `P ; Q` of a finite atom structure, with diversity atom `P`
/// mapped to `H^(P-1)` and the identity to the identity block.
pub fn m_coarse_table(m: &FiniteAtomStructure) -> CoarseTable {
    let block = |a: usize| if a == IDENTITY { CoarseBlock::Id } else { CoarseBlock::Base { base: a - 1 } };
    let mut table = Vec::new();
    for p in m.diversity_atoms() {
        for q in m.diversity_atoms() {
            table.push(CoarseEntry {
                left: block(p),
                right: block(q),
                result: m.atoms().filter(|&z| m.consistent(p, q, z)).map(block).collect(),
            });
        }
    }
    table
}

/// The coarse table of `blocks` read off the truncation `t`: for each ordered
/// pair of non-identity blocks, the blocks containing some `c` with
/// `(a, b, c)` consistent, `a` and `b` in the pair.
pub fn coarse_table_by_enumeration(
    spec: &AtomStructureSpec,
    blocks: &[CoarseBlock],
    t: &Truncation,
) -> Result<CoarseTable> {
    let members: Vec<Vec<SymbolicAtom>> = blocks.iter().map(|b| block_atoms(spec, b, t)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..blocks.len())
        .flat_map(|i| (0..blocks.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| blocks[i] != CoarseBlock::Id && blocks[j] != CoarseBlock::Id)
        .collect();
    let table = pairs
        .par_iter()
        .map(|&(i, j)| {
            let result = (0..blocks.len())
                .filter(|&c| {
                    members[i].iter().any(|&x| {
                        members[j].iter().any(|&y| members[c].iter().any(|&z| spec.consistent(x, y, z)))
                    })
                })
                .map(|c| blocks[c].clone())
                .collect();
            CoarseEntry {
                left: blocks[i].clone(),
                right: blocks[j].clone(),
                result,
            }
        })
        .collect();
    Ok(table)
}

/// The symbolic coarse table, after checking it against enumeration at rows
/// `< depth`. A disagreement is reported with a witness triple when the
/// enumeration has one.
pub fn check_coarse_embedding(spec: &BlurSpec, depth: u32) -> Result<CoarseTable> {
    let symbolic = coarse_embedding_table(spec);
    let wrapped = AtomStructureSpec::Blur(spec.clone());
    let t = Truncation::rows(depth);
    let enumerated = coarse_table_by_enumeration(&wrapped, &base_partition(spec), &t)?;
    for (s, e) in symbolic.iter().zip(&enumerated) {
        debug_assert_eq!((&s.left, &s.right), (&e.left, &e.right));
        if s.result == e.result {
            continue;
        }
        let differing = s.result.symmetric_difference(&e.result).next().expect("results differ");
        let [l, r, c] = [&s.left, &s.right, differing].map(|b| block_atoms(&wrapped, b, &t).expect("own blocks"));
        let witness = l.iter().find_map(|&x| {
            r.iter().find_map(|&y| c.iter().find(|&&z| wrapped.consistent(x, y, z)).map(|&z| (x, y, z)))
        });
        return Err(Error::CheckFailed(match witness {
            Some((x, y, z)) => format!(
                "coarse table disagrees at {:?};{:?}: ({x}, {y}, {z}) is consistent but the symbolic entry omits {differing:?}",
                s.left, s.right
            ),
            None => format!(
                "coarse table disagrees at {:?};{:?}: no triple below depth {depth} reaches {differing:?}",
                s.left, s.right
            ),
        }));
    }
    Ok(symbolic)
}

/// Where each atom of the truncation lives; `Err` names an atom in no block
/// or in two.
fn check_partition(spec: &AtomStructureSpec, blocks: &[CoarseBlock], t: &Truncation) -> Result<()> {
    let truncated: Vec<SymbolicAtom> = match spec {
        AtomStructureSpec::Blur(s) => std::iter::once(SymbolicAtom::Identity).chain(s.atoms_below(t.depth)).collect(),
        AtomStructureSpec::Alpha(a) => {
            let window = a.scheme.window(t.copies);
            std::iter::once(SymbolicAtom::Identity)
                .chain((0..window.node_count()).flat_map(|node| (0..a.colors).map(move |color| SymbolicAtom::Graph { node, color })))
                .collect()
        }
    };
    let mut seen: BTreeMap<SymbolicAtom, usize> = BTreeMap::new();
    for (i, b) in blocks.iter().enumerate() {
        for a in block_atoms(spec, b, t)? {
            if let Some(j) = seen.insert(a, i) {
                return Err(Error::CheckFailed(format!("atom {a} lies in blocks {j} and {i}")));
            }
        }
    }
    if let Some(a) = truncated.iter().find(|a| !seen.contains_key(a)) {
        return Err(Error::CheckFailed(format!("atom {a} lies in no block")));
    }
    if seen.len() != truncated.len() {
        return Err(Error::CheckFailed("blocks contain atoms outside the truncation".into()));
    }
    Ok(())
}

fn blocks_for(spec: &AtomStructureSpec, coloring: Option<&Coloring>) -> Result<Vec<CoarseBlock>> {
    match (spec, coloring) {
        (AtomStructureSpec::Blur(s), None) => Ok(base_partition(s)),
        (AtomStructureSpec::Alpha(a), Some(c)) => build_partition(a, c),
        (AtomStructureSpec::Blur(_), Some(_)) => Err(Error::InvalidParameter("blur structures take no coloring".into())),
        (AtomStructureSpec::Alpha(_), None) => Err(Error::InvalidParameter("α(G) needs a proper coloring".into())),
    }
}

/// The truncation a certificate is checked at: for `α`, the coloring's
/// window.
fn effective_truncation(spec: &AtomStructureSpec, coloring: Option<&Coloring>, t: Truncation) -> Result<Truncation> {
    match (spec, coloring) {
        (AtomStructureSpec::Alpha(a), Some(c)) => {
            let nodes = coloring_window(a, c)?.node_count();
            let copies = match a.scheme {
                GraphScheme::CliqueCopies { clique_size } => nodes / clique_size,
                GraphScheme::Finite(_) => t.copies,
            };
            Ok(Truncation { depth: t.depth, copies })
        }
        _ => Ok(t),
    }
}

fn verdicts(spec: &AtomStructureSpec, blocks: &[CoarseBlock], t: &Truncation) -> Result<Vec<MonoZeroVerdict>> {
    blocks
        .par_iter()
        .enumerate()
        .filter(|(_, b)| **b != CoarseBlock::Id)
        .map(|(block, b)| verify_mono_zero(spec, b, t).map(|zero| MonoZeroVerdict { block, zero }))
        .collect()
}

fn table_for(spec: &AtomStructureSpec, blocks: &[CoarseBlock], t: &Truncation) -> Result<CoarseTable> {
    match spec {
        AtomStructureSpec::Blur(s) => check_coarse_embedding(s, t.depth),
        AtomStructureSpec::Alpha(_) => coarse_table_by_enumeration(spec, blocks, t),
    }
}

fn infinite_carrier(spec: &AtomStructureSpec) -> bool {
    match spec {
        AtomStructureSpec::Blur(_) => true,
        AtomStructureSpec::Alpha(a) => a.scheme.is_infinite(),
    }
}

/// Assembles a certificate. Blur structures are partitioned by base atom;
/// `α(G)` needs a proper coloring of a finite window of `G`. Aborts on the
/// first failing item.
pub fn certify(
    spec: &AtomStructureSpec,
    coloring: Option<&Coloring>,
    truncation: Truncation,
    seed: u64,
) -> Result<NonRepCertificate> {
    if !infinite_carrier(spec) {
        return Err(Error::CheckFailed("the carrier is finite: nothing to contradict".into()));
    }
    let blocks = blocks_for(spec, coloring)?;
    let t = effective_truncation(spec, coloring, truncation)?;
    check_partition(spec, &blocks, &t)?;
    if let Some(b) = blocks.iter().find(|b| !monochromatic(b)) {
        return Err(Error::CheckFailed(format!("block {b:?} is not monochromatic")));
    }
    let mono_zero = verdicts(spec, &blocks, &t)?;
    if let Some(v) = mono_zero.iter().find(|v| !v.zero) {
        return Err(Error::CheckFailed(format!("block {} ({:?}) is not mono-zero", v.block, blocks[v.block])));
    }
    let coarse_table = table_for(spec, &blocks, &t)?;
    let mut cert = NonRepCertificate {
        spec: CertifiedSpec {
            params: spec.params(),
            coloring: coloring.map(|c| c.assignment.clone()),
            truncation: t,
        },
        blocks,
        mono_zero,
        coarse_table,
        flags: CertificateFlags {
            infinite_carrier: true,
            finite_partition: true,
        },
        tool_version: crate::TOOL_VERSION.to_string(),
        seed,
        checksum: String::new(),
    };
    cert.checksum = cert.compute_checksum();
    Ok(cert)
}

/// Parses and re-verifies a certificate from the spec parameters alone. The
/// checksum is compared last, so a corrupted field is reported as such.
pub fn check_certificate(text: &str) -> std::result::Result<NonRepCertificate, CertificateError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CertificateError::Malformed(e.to_string()))?;
    let found = value
        .get("tool_version")
        .and_then(|v| v.as_str())
        .ok_or_else(|| CertificateError::Malformed("missing `tool_version`".into()))?;
    if found != crate::TOOL_VERSION {
        return Err(CertificateError::VersionMismatch {
            found: found.into(),
            expected: crate::TOOL_VERSION.into(),
        });
    }
    let cert: NonRepCertificate = serde_json::from_value(value).map_err(|e| CertificateError::Malformed(e.to_string()))?;
    verify_certificate(&cert)?;
    Ok(cert)
}

/// The field-by-field part of [`check_certificate`].
pub fn verify_certificate(cert: &NonRepCertificate) -> std::result::Result<(), CertificateError> {
    let spec = AtomStructureSpec::from_params(&cert.spec.params).map_err(|e| reverify("spec", None, e.to_string()))?;
    let coloring = cert.spec.coloring.clone().map(Coloring::new);
    let t = effective_truncation(&spec, coloring.as_ref(), cert.spec.truncation)
        .map_err(|e| reverify("spec", None, e.to_string()))?;
    if t != cert.spec.truncation {
        return Err(reverify("spec", None, "truncation does not match the coloring window"));
    }

    let blocks = blocks_for(&spec, coloring.as_ref()).map_err(|e| reverify("blocks", None, e.to_string()))?;
    if blocks.len() != cert.blocks.len() {
        return Err(reverify("blocks", None, format!("expected {} blocks, found {}", blocks.len(), cert.blocks.len())));
    }
    if let Some(i) = (0..blocks.len()).find(|&i| blocks[i] != cert.blocks[i]) {
        return Err(reverify("blocks", Some(i), format!("expected {:?}", blocks[i])));
    }
    check_partition(&spec, &blocks, &t).map_err(|e| reverify("blocks", None, e.to_string()))?;

    let expected = verdicts(&spec, &blocks, &t).map_err(|e| reverify("mono_zero", None, e.to_string()))?;
    if expected.len() != cert.mono_zero.len() {
        return Err(reverify("mono_zero", None, format!("expected {} verdicts, found {}", expected.len(), cert.mono_zero.len())));
    }
    for (e, f) in expected.iter().zip(&cert.mono_zero) {
        if e != f {
            return Err(reverify("mono_zero", Some(e.block), format!("expected zero = {}, found {f:?}", e.zero)));
        }
    }
    if let Some(v) = expected.iter().find(|v| !v.zero) {
        return Err(reverify("mono_zero", Some(v.block), "block is not mono-zero"));
    }

    let table = table_for(&spec, &blocks, &t).map_err(|e| reverify("coarse_table", None, e.to_string()))?;
    if table != cert.coarse_table {
        let detail = match table.iter().zip(&cert.coarse_table).find(|(a, b)| a != b) {
            Some((a, _)) => format!("entry {:?};{:?} should be {:?}", a.left, a.right, a.result),
            None => format!("expected {} entries, found {}", table.len(), cert.coarse_table.len()),
        };
        return Err(reverify("coarse_table", None, detail));
    }

    let flags = CertificateFlags {
        infinite_carrier: infinite_carrier(&spec),
        finite_partition: true,
    };
    if flags != cert.flags {
        return Err(reverify("flags", None, format!("expected {flags:?}")));
    }

    let computed = cert.compute_checksum();
    if computed != cert.checksum {
        return Err(CertificateError::Checksum {
            recorded: cert.checksum.clone(),
            computed,
        });
    }
    Ok(())
}

/// Clique copies kept in each Monk sequence member's window.
pub const MONK_COPIES: usize = 10;

#[derive(Clone, Debug)]
pub struct MonkMember {
    pub clique_size: usize,
    /// The finite window: [`MONK_COPIES`] disjoint cliques.
    pub graph: Graph,
    /// `α` over countably many copies of the clique.
    pub spec: AtomStructureSpec,
    pub certificate: NonRepCertificate,
    pub chromatic_number: usize,
}

/// Members `i < count` over disjoint cliques of size `n(n-1)/2 + i`, each
/// with `n` colors and certified with an optimal coloring of its window.
pub fn monk_sequence(n: usize, count: usize, seed: u64) -> Result<Vec<MonkMember>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    (0..count)
        .map(|i| {
            let clique_size = n * (n - 1) / 2 + i;
            let scheme = GraphScheme::CliqueCopies { clique_size };
            let graph = scheme.window(MONK_COPIES);
            let spec = alpha_of_graph(scheme, n)?;
            let (chromatic_number, coloring) = chromatic_number(&graph);
            let certificate = certify(&spec, Some(&coloring), Truncation::cliques(MONK_COPIES), seed)?;
            Ok(MonkMember {
                clique_size,
                graph,
                spec,
                certificate,
                chromatic_number,
            })
        })
        .collect()
}

/// `ℱ(i, 1)` over `3i` base atoms for `i = 2, …, count + 1`.
pub fn f_sequence(count: usize) -> Result<Vec<AtomStructureSpec>> {
    (2..count + 2).map(|i| f_l_mu(&default_atom_names(3 * i), i, 1)).collect()
}

/// [`f_sequence`] with each member's blur-condition report.
pub fn f_sequence_reports(count: usize) -> Result<Vec<(AtomStructureSpec, BlurReport)>> {
    f_sequence(count)?
        .into_iter()
        .map(|spec| {
            let report = check_blur_conditions(spec.as_blur().expect("ℱ(l, μ) is a blur structure"));
            Ok((spec, report))
        })
        .collect()
}
