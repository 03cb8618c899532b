//! Certificates embedded in reports, and their independent re-verification.
//!
//! Every mathematical object is stored in its canonical text form, so a
//! certificate can be re-checked from the report alone.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;

use dynideal::fraisse::{
    amalgamate, check_amalgam, check_heredity, check_invariance, enumerate_structures, pure_host, substructures,
    tree_host, vector_host, AmalgamResult, ConjugationWitness, FinStructure, Label, Signature,
};
use dynideal::game::{validate_transcript, GameTranscript, Player, Round, StrategyFault};
use dynideal::hfa::{act_hf, check_support, definable_closure, orbit_decomposition, support_invariance, HFSet};
use dynideal::perm::FinitePermutation;
use dynideal::rational::{one, parse_rational, zero, Rational};
use dynideal::witnesses::{
    check_sigma, simplicity_check, Evidence, Factor, FactorizationWitness, GapRecord, LargenessCertificate, SigmaKind,
    SigmaWitness,
};
use dynideal::{BlockSet, Elem, Instance, PLMap, QuadExt};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::scenario::{InstanceSpec, Strategies};

fn bad(e: impl Display) -> CliError {
    CliError::Report(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum EvidenceRecord {
    Margins { l: String, u: String },
    Fresh { count: usize },
}

impl EvidenceRecord {
    pub fn of(e: &Evidence) -> Self {
        match e {
            Evidence::Margins { l, u } => EvidenceRecord::Margins { l: l.to_string(), u: u.to_string() },
            Evidence::Fresh { count } => EvidenceRecord::Fresh { count: *count },
        }
    }

    fn parse(&self) -> Result<Evidence, CliError> {
        Ok(match self {
            EvidenceRecord::Margins { l, u } => {
                Evidence::Margins { l: parse_rational(l).map_err(bad)?, u: parse_rational(u).map_err(bad)? }
            }
            EvidenceRecord::Fresh { count } => Evidence::Fresh { count: *count },
        })
    }
}

/// A largeness certificate in text form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeRecord {
    pub base: String,
    pub large: String,
    pub evidence: EvidenceRecord,
}

impl LargeRecord {
    pub fn of(c: &LargenessCertificate) -> Self {
        LargeRecord { base: c.base.to_string(), large: c.large.to_string(), evidence: EvidenceRecord::of(&c.evidence) }
    }

    fn parse(&self, inst: &Instance) -> Result<LargenessCertificate, CliError> {
        Ok(LargenessCertificate {
            instance: inst.clone(),
            base: inst.parse_elem(&self.base)?,
            large: inst.parse_elem(&self.large)?,
            evidence: self.evidence.parse()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum RoundEvidenceRecord {
    Cover { certificate: LargeRecord },
    Stratified { threshold: usize, accumulated_size: usize },
    Interleave { holds: bool, cb_rank: usize, accumulated_size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceEntry {
    pub player: String,
    pub evidence: RoundEvidenceRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub a: String,
    pub gamma: String,
    pub evidence: Vec<EvidenceEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultRecord {
    pub round: usize,
    pub player: String,
    pub reason: String,
}

/// What a game must show to pass, beyond a legal transcript whose recorded
/// evidence holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameDemands {
    pub outcome_in_ideal: bool,
    /// The rank of the position must grow within every window of this many rounds.
    pub rank_window: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub instance: InstanceSpec,
    pub strategies: Strategies,
    pub seed: u64,
    pub horizon: usize,
    pub move_cap: usize,
    pub rounds: Vec<RoundRecord>,
    pub accumulated: String,
    pub forfeit: Option<FaultRecord>,
    pub demands: GameDemands,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapText {
    pub lo: Option<String>,
    pub hi: Option<String>,
    pub thresholds: Vec<String>,
    pub limit: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub conjugator: String,
    pub core: String,
    pub fixes: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub table: String,
    pub violation: Option<(Pairs, Pairs)>,
}

/// A label map as a sorted list of pairs.
pub type Pairs = Vec<(Label, Label)>;

pub fn pairs(m: &BTreeMap<Label, Label>) -> Pairs {
    m.iter().map(|(x, y)| (*x, *y)).collect()
}

fn map(p: &Pairs) -> Result<BTreeMap<Label, Label>, CliError> {
    let m: BTreeMap<Label, Label> = p.iter().copied().collect();
    if m.len() != p.len() {
        return Err(bad("repeated label in a map"));
    }
    Ok(m)
}

/// Hosts are stored by shape when they are one of the standard ones, and
/// in full otherwise (hosts enlarged during a construction).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum HostSpec {
    Pure { n: u32 },
    Vector { q: u32, dim: usize },
    Tree { branching: u32 },
    Explicit { structure: String },
}

impl HostSpec {
    pub fn build(&self) -> Result<FinStructure, CliError> {
        Ok(match self {
            HostSpec::Pure { n } => pure_host(*n),
            HostSpec::Vector { q, dim } => vector_host(*q, *dim),
            HostSpec::Tree { branching } => tree_host(*branching),
            HostSpec::Explicit { structure: s } => structure(s)?,
        })
    }

    pub fn of(m: &FinStructure) -> HostSpec {
        let shape = match m.signature() {
            Signature::PureSet => Some(HostSpec::Pure { n: m.len() as u32 }),
            Signature::VectorSpace { q } => Some(HostSpec::Vector { q, dim: m.dim() }),
            Signature::Ultrametric => {
                (1..=m.len() as u32).find(|b| (b * b * b) as usize >= m.len()).map(|b| HostSpec::Tree { branching: b })
            }
            Signature::QuadSelector => None,
        };
        match shape {
            Some(h) if h.build().is_ok_and(|built| built == *m) => h,
            _ => HostSpec::Explicit { structure: m.to_string() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// `gamma` fixes `a` and `c ⊆ gamma·large`, with `large` certified `a`-large.
    Cover { instance: InstanceSpec, c: String, certificate: LargeRecord, gamma: String },
    /// A certificate and its image under `delta`.
    Transport { instance: InstanceSpec, certificate: LargeRecord, delta: String, moved: LargeRecord },
    Transcript(Box<TranscriptRecord>),
    Sigma {
        variant: String,
        a: String,
        family: Vec<String>,
        maps: Vec<String>,
        gaps: Vec<GapText>,
        union: String,
    },
    Rank { b: String, c: String, rank_b: usize, rank_c: usize },
    RankImage { s: String, gamma: String, image: String, rank: usize },
    RankPair { s: String, t: String, rank_s: usize, rank_t: usize },
    Simplicity { n: usize, a: BTreeSet<usize>, b: BTreeSet<usize> },
    Factorization { target: String, a: BTreeSet<usize>, b: BTreeSet<usize>, factors: Vec<FactorRecord> },
    Support { instance: InstanceSpec, set: String, support: String },
    SupportMove { instance: InstanceSpec, set: String, support: String, gamma: String },
    Selector { instance: InstanceSpec, family: String, certificate: LargeRecord, selector: String },
    ClosureLaws { n: usize },
    Orbits { instance: InstanceSpec, set: String, a: String, budget: usize },
    Refutation { instance: InstanceSpec, candidate: String, b: String, gamma: String },
    Amalgam {
        a: String,
        b: String,
        amalgam: String,
        embed_a: Pairs,
        embed_b: Pairs,
        phi: Pairs,
        psi: Pairs,
    },
    Impossibility { signature: String, a_size: usize, b_size: usize, cases: Vec<CaseRecord> },
    Conjugation {
        host: HostSpec,
        a: BTreeSet<Label>,
        b: BTreeSet<Label>,
        pi: Pairs,
        e: BTreeSet<Label>,
        f: BTreeSet<Label>,
        theta: Pairs,
        delta: Pairs,
        gamma: Pairs,
        kappa: Pairs,
    },
}

fn blocks(s: &str) -> Result<BlockSet, CliError> {
    BlockSet::parse(s).map_err(bad)
}

fn perm(s: &str) -> Result<FinitePermutation, CliError> {
    FinitePermutation::parse(s).map_err(bad)
}

fn hf(s: &str) -> Result<HFSet, CliError> {
    HFSet::parse(s).map_err(bad)
}

fn structure(s: &str) -> Result<FinStructure, CliError> {
    FinStructure::parse(s).map_err(bad)
}

fn quad(s: &Option<String>) -> Result<Option<QuadExt>, CliError> {
    s.as_deref().map(QuadExt::parse).transpose().map_err(bad)
}

pub fn sigma_variant(kind: SigmaKind) -> &'static str {
    match kind {
        SigmaKind::WellOrdered => "well-ordered",
        SigmaKind::BoundedBelow => "bounded-below",
    }
}

pub fn gap_text(g: &GapRecord) -> GapText {
    GapText {
        lo: g.lo.as_ref().map(|x| x.to_string()),
        hi: g.hi.as_ref().map(|x| x.to_string()),
        thresholds: g.thresholds.iter().map(|x| x.to_string()).collect(),
        limit: g.limit.as_ref().map(|x| x.to_string()),
    }
}

fn player(s: &str) -> Result<Player, CliError> {
    match s {
        "I" => Ok(Player::I),
        "II" => Ok(Player::II),
        other => Err(bad(format!("unknown player {other:?}"))),
    }
}

fn interior_points(e: &Elem) -> Vec<Rational> {
    match e {
        Elem::Blocks(b) => b.points().iter().filter(|p| **p > zero() && **p < one()).cloned().collect(),
        _ => Vec::new(),
    }
}

fn cb_rank(e: &Elem) -> Option<usize> {
    match e {
        Elem::Blocks(b) => Some(b.cb_rank()),
        _ => None,
    }
}

fn check_transcript(t: &TranscriptRecord) -> Result<bool, CliError> {
    let inst = t.instance.build()?;
    let mut rounds = Vec::new();
    for r in &t.rounds {
        rounds.push(Round { a: inst.parse_elem(&r.a)?, gamma: inst.parse_group(&r.gamma)?, evidence: Vec::new() });
    }
    let forfeit = match &t.forfeit {
        Some(f) => Some(StrategyFault { round: f.round, player: player(&f.player)?, reason: f.reason.clone() }),
        None => None,
    };
    let game = GameTranscript {
        instance: inst.clone(),
        horizon: t.horizon,
        rounds: rounds.clone(),
        accumulated: inst.parse_elem(&t.accumulated)?,
        forfeit,
        move_cap: t.move_cap,
    };
    if !validate_transcript(&game).is_empty() || game.forfeit.is_some() {
        return Ok(false);
    }
    let mut acc = inst.empty();
    let mut ranks = Vec::new();
    for (r, rec) in rounds.iter().zip(&t.rounds) {
        let before = acc.clone();
        acc = inst.union(&acc, &inst.act(&r.gamma, &r.a)?)?;
        ranks.push(cb_rank(&acc));
        for entry in &rec.evidence {
            player(&entry.player)?;
            let holds = match &entry.evidence {
                RoundEvidenceRecord::Cover { certificate } => {
                    let cert = certificate.parse(&inst)?;
                    cert.is_valid() && cert.base == acc && inst.is_subset(&acc, &cert.large)?
                }
                RoundEvidenceRecord::Stratified { threshold, accumulated_size } => match &acc {
                    Elem::Points(p) => p.len() == *accumulated_size && p.len() >= *threshold,
                    _ => false,
                },
                RoundEvidenceRecord::Interleave { holds, cb_rank: rank, accumulated_size } => {
                    let pts = interior_points(&before);
                    let moved = match inst.act(&r.gamma, &r.a)? {
                        Elem::Blocks(b) => b.points().to_vec(),
                        _ => Vec::new(),
                    };
                    let between = pts.windows(2).all(|w| moved.iter().any(|x| *x > w[0] && *x < w[1]));
                    let size = match &acc {
                        Elem::Blocks(b) => b.points().len(),
                        _ => usize::MAX,
                    };
                    *holds && between && cb_rank(&acc) == Some(*rank) && size == *accumulated_size
                }
            };
            if !holds {
                return Ok(false);
            }
        }
    }
    if t.demands.outcome_in_ideal && !inst.contains(&acc)? {
        return Ok(false);
    }
    if let Some(w) = t.demands.rank_window {
        if w == 0 || ranks.iter().any(Option::is_none) {
            return Ok(false);
        }
        if ranks.windows(w + 1).any(|r| r[w] <= r[0]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive definable-closure laws on `Sym(n)`: extensive, idempotent,
/// monotone, and equivariant under the cyclic shift.
pub fn closure_laws(n: usize) -> Result<bool, CliError> {
    let inst = Instance::FiniteSym { n, k: n + 1 };
    let subsets: Vec<BTreeSet<usize>> =
        (0u32..1 << n).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect();
    let dcl = |s: &BTreeSet<usize>| -> Result<BTreeSet<usize>, CliError> {
        match definable_closure(&inst, &Elem::Points(s.clone())).map_err(bad)? {
            Elem::Points(p) => Ok(p),
            other => Err(bad(format!("closure returned {other}"))),
        }
    };
    let closed: Vec<BTreeSet<usize>> = subsets.iter().map(dcl).collect::<Result<_, _>>()?;
    let shift = FinitePermutation::from_images((0..n).map(|x| (x + 1) % n).collect()).map_err(bad)?;
    for (s, d) in subsets.iter().zip(&closed) {
        if !s.is_subset(d) || dcl(d)? != *d || dcl(&shift.image_set(s))? != shift.image_set(d) {
            return Ok(false);
        }
        for (t, e) in subsets.iter().zip(&closed) {
            if s.is_subset(t) && !d.is_subset(e) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl Certificate {
    /// Recompute the claim from the stored data alone. `Err` means the
    /// certificate could not even be read.
    pub fn verify(&self) -> Result<bool, CliError> {
        match self {
            Certificate::Cover { instance, c, certificate, gamma } => {
                let inst = instance.build()?;
                let cert = certificate.parse(&inst)?;
                let c = inst.parse_elem(c)?;
                let g = inst.parse_group(gamma)?;
                Ok(cert.is_valid()
                    && inst.is_group_member(&g)
                    && inst.contains(&c)?
                    && inst.in_pstab(&g, &cert.base)?
                    && inst.is_subset(&c, &inst.act(&g, &cert.large)?)?)
            }
            Certificate::Transport { instance, certificate, delta, moved } => {
                let inst = instance.build()?;
                let cert = certificate.parse(&inst)?;
                let moved = moved.parse(&inst)?;
                let d = inst.parse_group(delta)?;
                Ok(cert.is_valid()
                    && moved.is_valid()
                    && inst.is_group_member(&d)
                    && moved.base == inst.act(&d, &cert.base)?
                    && moved.large == inst.act(&d, &cert.large)?)
            }
            Certificate::Transcript(t) => check_transcript(t),
            Certificate::Sigma { variant, a, family, maps, gaps, union } => {
                let kind = match variant.as_str() {
                    "well-ordered" => SigmaKind::WellOrdered,
                    "bounded-below" => SigmaKind::BoundedBelow,
                    other => return Err(bad(format!("unknown sigma variant {other:?}"))),
                };
                let a = blocks(a)?;
                let bs: Vec<BlockSet> = family.iter().map(|s| blocks(s)).collect::<Result<_, _>>()?;
                let maps: Vec<PLMap> = maps.iter().map(|s| PLMap::parse(s).map_err(bad)).collect::<Result<_, _>>()?;
                let mut recs = Vec::new();
                for g in gaps {
                    recs.push(GapRecord {
                        lo: quad(&g.lo)?,
                        hi: g.hi.as_deref().map(parse_rational).transpose().map_err(bad)?,
                        thresholds: g.thresholds.iter().map(|x| parse_rational(x)).collect::<Result<_, _>>().map_err(bad)?,
                        limit: quad(&g.limit)?,
                    });
                }
                let union = blocks(union)?;
                let shape_ok = union.is_well_ordered() && (kind == SigmaKind::WellOrdered || union.is_bounded_below_every());
                let w = SigmaWitness { kind, maps, gaps: recs, union };
                Ok(shape_ok && check_sigma(&a, &bs, &w).is_ok())
            }
            Certificate::Rank { b, c, rank_b, rank_c } => {
                let (b, c) = (blocks(b)?, blocks(c)?);
                let ideal = Instance::CountableClosedQ;
                Ok(b.cb_rank() == *rank_b
                    && c.cb_rank() == *rank_c
                    && *rank_c == rank_b + 1
                    && ideal.contains(&Elem::Blocks(b))?
                    && ideal.contains(&Elem::Blocks(c))?)
            }
            Certificate::RankImage { s, gamma, image, rank } => {
                let inst = Instance::CountableClosedQ;
                let s = inst.parse_elem(s)?;
                let g = inst.parse_group(gamma)?;
                let img = inst.parse_elem(image)?;
                Ok(inst.is_group_member(&g)
                    && inst.act(&g, &s)? == img
                    && cb_rank(&s) == Some(*rank)
                    && cb_rank(&img) == Some(*rank))
            }
            Certificate::RankPair { s, t, rank_s, rank_t } => {
                let inst = Instance::CountableClosedQ;
                let (s, t) = (inst.parse_elem(s)?, inst.parse_elem(t)?);
                Ok(inst.is_subset(&s, &t)?
                    && cb_rank(&s) == Some(*rank_s)
                    && cb_rank(&t) == Some(*rank_t)
                    && rank_s <= rank_t)
            }
            Certificate::Simplicity { n, a, b } => {
                Ok(a.is_subset(b) && b.len() + 2 <= *n && simplicity_check(*n, a, b).map_err(bad)?)
            }
            Certificate::Factorization { target, a, b, factors } => {
                let target = perm(target)?;
                let mut fs = Vec::new();
                for f in factors {
                    fs.push(Factor { conjugator: perm(&f.conjugator)?, core: perm(&f.core)?, fixes: f.fixes.clone() });
                }
                let w = FactorizationWitness { target, a: a.clone(), b: b.clone(), factors: fs };
                Ok(w.factors.len() == 2 && w.target.fixes_pointwise(a) && w.verify().is_ok())
            }
            Certificate::Support { instance, set, support } => {
                let inst = instance.build()?;
                let b = inst.parse_elem(support)?;
                Ok(inst.contains(&b)? && check_support(&inst, &hf(set)?, &b).map_err(bad)?.verified)
            }
            Certificate::SupportMove { instance, set, support, gamma } => {
                let inst = instance.build()?;
                let (x, b, g) = (hf(set)?, inst.parse_elem(support)?, inst.parse_group(gamma)?);
                Ok(check_support(&inst, &x, &b).map_err(bad)?.verified
                    && support_invariance(&inst, &g, &b, &x).map_err(bad)?)
            }
            Certificate::Selector { instance, family, certificate, selector } => {
                let inst = instance.build()?;
                let cert = certificate.parse(&inst)?;
                let (family, f) = (hf(family)?, hf(selector)?);
                let mut firsts = BTreeSet::new();
                for p in f.members() {
                    let Some((b, c)) = p.unpair() else { return Ok(false) };
                    if !b.contains(&c) {
                        return Ok(false);
                    }
                    firsts.insert(b);
                }
                let members: BTreeSet<HFSet> = family.members().into_iter().collect();
                Ok(cert.is_valid()
                    && firsts == members
                    && f.members().len() == members.len()
                    && members.iter().all(|b| check_support(&inst, b, &cert.base).is_ok_and(|c| c.verified))
                    && check_support(&inst, &f, &cert.large).map_err(bad)?.verified)
            }
            Certificate::ClosureLaws { n } => closure_laws(*n),
            Certificate::Orbits { instance, set, a, budget } => {
                let inst = instance.build()?;
                let d = orbit_decomposition(&inst, &hf(set)?, &inst.parse_elem(a)?, *budget).map_err(bad)?;
                Ok(d.orbits_invariant && d.supports_spread)
            }
            Certificate::Refutation { instance, candidate, b, gamma } => {
                let inst = instance.build()?;
                let (f, b, g) = (hf(candidate)?, inst.parse_elem(b)?, inst.parse_group(gamma)?);
                Ok(inst.contains(&b)?
                    && inst.is_group_member(&g)
                    && inst.in_pstab(&g, &b)?
                    && act_hf(&inst, &g, &f).map_err(bad)? != f)
            }
            Certificate::Amalgam { a, b, amalgam, embed_a, embed_b, phi, psi } => {
                let (a, b) = (structure(a)?, structure(b)?);
                let r = AmalgamResult { amalgam: structure(amalgam)?, embed_a: map(embed_a)?, embed_b: map(embed_b)? };
                if check_amalgam(&a, &b, &r).is_err() || !check_invariance(&a, &b, &map(phi)?, &map(psi)?).map_err(bad)? {
                    return Ok(false);
                }
                let common: BTreeSet<Label> = a.universe().intersection(b.universe()).copied().collect();
                for s in substructures(&a).into_iter().filter(|s| common.is_subset(s)) {
                    if !check_heredity(&s, &a, &b).map_err(bad)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Certificate::Impossibility { signature, a_size, b_size, cases } => {
                let sig = Signature::parse(signature).map_err(bad)?;
                let union: Vec<Label> = (0..(a_size + b_size) as Label).collect();
                let all: BTreeSet<String> = enumerate_structures(sig, &union).iter().map(|s| s.to_string()).collect();
                let logged: BTreeSet<String> = cases.iter().map(|c| c.table.clone()).collect();
                if all != logged || logged.len() != cases.len() {
                    return Ok(false);
                }
                let la: BTreeSet<Label> = (0..*a_size as Label).collect();
                let lb: BTreeSet<Label> = (*a_size as Label..(a_size + b_size) as Label).collect();
                for c in cases {
                    let Some((s, t)) = &c.violation else { return Ok(false) };
                    let (s, t) = (map(s)?, map(t)?);
                    let onto = |m: &BTreeMap<Label, Label>, dom: &BTreeSet<Label>| {
                        m.keys().copied().collect::<BTreeSet<_>>() == *dom && m.values().copied().collect::<BTreeSet<_>>() == *dom
                    };
                    if !onto(&s, &la) || !onto(&t, &lb) {
                        return Ok(false);
                    }
                    let table = structure(&c.table)?;
                    let m: BTreeMap<Label, Label> = s.iter().chain(t.iter()).map(|(x, y)| (*x, *y)).collect();
                    if table.relabel(&m) == table {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Certificate::Conjugation { host, a, b, pi, e, f, theta, delta, gamma, kappa } => {
                let w = ConjugationWitness {
                    host: host.build()?,
                    grown: false,
                    a: a.clone(),
                    b: b.clone(),
                    pi: map(pi)?,
                    e: e.clone(),
                    f: f.clone(),
                    theta: map(theta)?,
                    delta: map(delta)?,
                    gamma: map(gamma)?,
                    kappa: map(kappa)?,
                };
                Ok(w.verify().is_ok())
            }
        }
    }
}

/// A fresh amalgam certificate for a position.
pub fn amalgam_certificate(
    a: &FinStructure,
    b: &FinStructure,
    phi: BTreeMap<Label, Label>,
    psi: BTreeMap<Label, Label>,
) -> Result<Certificate, CliError> {
    let r = amalgamate(a, b).map_err(bad)?;
    Ok(Certificate::Amalgam {
        a: a.to_string(),
        b: b.to_string(),
        amalgam: r.amalgam.to_string(),
        embed_a: pairs(&r.embed_a),
        embed_b: pairs(&r.embed_b),
        phi: pairs(&phi),
        psi: pairs(&psi),
    })
}

