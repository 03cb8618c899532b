//! Turning a scenario into check records.

use std::collections::{BTreeMap, BTreeSet};

use dynideal::fraisse::{
    amalgamation_positions, conjugation_witness, no_canonical_amalgam_search, pure_host, random_case, tree_host,
    vector_host, FinStructure, Label, Signature,
};
use dynideal::game::{
    cofinal_strategy_ii, interleave_strategy_i, random_strategy_i, random_strategy_ii, run_game, stratified_strategy_i,
    trivial_strategy_ii, Player, RoundEvidence, StrategyI, StrategyII, DEFAULT_MOVE_CAP,
};
use dynideal::hfa::{choice_selector, find_support, orbit, pstab_generators, sample_hf, selectors, HFSet};
use dynideal::perm::FinitePermutation;
use dynideal::witnesses::{
    a_large, conjugate_factorization, cover_witness, largeness_conjugation, refute_cofinal_countableclosed,
    sigma_witness_bounded_below, sigma_witness_wellordered, WitnessError,
};
use dynideal::{BlockSet, Elem, Instance};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cert::{
    amalgam_certificate, gap_text, pairs, sigma_variant, CaseRecord, Certificate, EvidenceEntry, FactorRecord,
    FaultRecord, GameDemands, HostSpec, LargeRecord, RoundEvidenceRecord, RoundRecord, TranscriptRecord,
};
use crate::error::CliError;
use crate::scenario::{InstanceSpec, Scenario, Strategies, Task};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub claim: String,
    pub anchor: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Absent only when the construction itself failed.
    pub certificate: Option<Certificate>,
}

const COVER: &str = "cofinal orbits: every ideal set is moved into a large set by its stabilizer";
const TRANSPORT: &str = "largeness is invariant under the group action";
const GAME: &str = "the dependent-choice game on an invariant ideal";
const SIGMA: &str = "sigma-completeness of stabilizer orbits for well-ordered sets";
const RANK: &str = "Cantor-Bendixson rank obstruction for closed countable sets";
const SIMPLE: &str = "normal closures of pointwise stabilizers in finite symmetric groups";
const FACTOR: &str = "factorization into conjugates of stabilizer elements";
const SUPPORT: &str = "supports and definable closure in permutation models";
const SELECT: &str = "choice selectors supported by large sets";
const ABELIAN: &str = "abelian group actions admit no invariant selector";
const AMALGAM: &str = "canonical amalgamation: axioms, invariance, heredity";
const IMPOSSIBLE: &str = "selector structures have no canonical amalgam";
const CONJUGATE: &str = "conjugation witnesses in homogeneous structures";

/// Seed for sub-run `i` of a scenario seeded with `seed`.
pub fn derive_seed(seed: u64, i: u64) -> u64 {
    seed ^ i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn rng_for(seed: u64, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, i as u64))
}

fn checked(id: String, claim: String, anchor: &str, cert: Result<Certificate, String>) -> CheckRecord {
    match cert {
        Ok(c) => {
            let (pass, note) = match c.verify() {
                Ok(p) => (p, None),
                Err(e) => (false, Some(e.to_string())),
            };
            CheckRecord { id, claim, anchor: anchor.into(), pass, note, certificate: Some(c) }
        }
        Err(e) => CheckRecord { id, claim, anchor: anchor.into(), pass: false, note: Some(e), certificate: None },
    }
}

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn run_scenario_checks(sc: &Scenario) -> Result<Vec<CheckRecord>, CliError> {
    sc.validate()?;
    match sc.task {
        Task::Cover => cover(sc),
        Task::Sigma => sigma(sc),
        Task::Rank => rank(sc),
        Task::Simplicity => simplicity(sc),
        Task::Factorization => factorization(sc),
        Task::Play => play(sc),
        Task::Support => support(sc),
        Task::Abelian => abelian(sc),
        Task::Amalgamation => amalgamation(sc),
    }
}

fn cover_cert(inst: &Instance, a: &Elem, c: &Elem) -> Result<Certificate, String> {
    let (_, cert) = a_large(inst, a).map_err(s)?;
    let g = cover_witness(inst, &cert, c).map_err(s)?;
    Ok(Certificate::Cover {
        instance: InstanceSpec::of(inst),
        c: c.to_string(),
        certificate: LargeRecord::of(&cert),
        gamma: g.to_string(),
    })
}

fn small_sets(n: usize, k: usize) -> Vec<Elem> {
    (0u64..1 << n)
        .filter(|m| (m.count_ones() as usize) < k)
        .map(|m| Elem::Points((0..n).filter(|i| m >> i & 1 == 1).collect()))
        .collect()
}

fn cover(sc: &Scenario) -> Result<Vec<CheckRecord>, CliError> {
    let inst = sc.instance()?;
    let claim = |a: &Elem, c: &Elem| format!("a = {a}: some γ fixing a has {c} ⊆ γ·b");
    if let (Instance::FiniteSym { n, k }, 0) = (&inst, sc.trials) {
        let sets = small_sets(*n, *k);
        let pairs: Vec<(&Elem, &Elem)> = sets.iter().flat_map(|a| sets.iter().map(move |c| (a, c))).collect();
        return Ok(pairs
            .par_iter()
            .enumerate()
            .map(|(i, (a, c))| checked(format!("cover-{i:05}"), claim(a, c), COVER, cover_cert(&inst, a, c)))
            .collect());
    }
    let mut out: Vec<CheckRecord> = (0..sc.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(sc.seed, i);
            let a = inst.sample_ideal_with(&mut rng, 3);
            let c = inst.sample_ideal_with(&mut rng, 3);
            checked(format!("cover-{i:05}"), claim(&a, &c), COVER, cover_cert(&inst, &a, &c))
        })
        .collect();
    let transports: Vec<CheckRecord> = (0..sc.trials.div_ceil(10))
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(sc.seed ^ 0x7a, i);
            let a = inst.sample_ideal_with(&mut rng, 3);
            let d = inst.sample_group_with(&mut rng, 3);
            let cert = a_large(&inst, &a).map_err(s).and_then(|(_, cert)| {
                let moved = largeness_conjugation(&inst, &cert, &d).map_err(s)?;
                Ok(Certificate::Transport {
                    instance: InstanceSpec::of(&inst),
                    certificate: LargeRecord::of(&cert),
                    delta: d.to_string(),
                    moved: LargeRecord::of(&moved),
                })
            });
            checked(format!("transport-{i:05}"), format!("certificate for {a} transports along δ"), TRANSPORT, cert)
        })
        .collect();
    out.extend(transports);
    Ok(out)
}

fn blocks_of(e: Elem) -> BlockSet {
    match e {
        Elem::Blocks(b) => b,
        other => unreachable!("block instance sampled {other}"),
    }
}

/// Seeded sigma inputs; inputs sharing a left limit with the fixed set are
/// redrawn, and the number of redraws is returned.
fn sigma_input(inst: &Instance, rng: &mut ChaCha8Rng, len: usize) -> Result<(BlockSet, Vec<BlockSet>, Certificate, usize), String> {
    let mut redrawn = 0;
    loop {
        let a = blocks_of(inst.sample_ideal_with(rng, 3));
        let bs: Vec<BlockSet> = (0..len).map(|_| blocks_of(inst.sample_ideal_with(rng, 2))).collect();
        let w = match inst {
            Instance::WellOrderedQ => sigma_witness_wellordered(&a, &bs),
            _ => sigma_witness_bounded_below(&a, &bs),
        };
        match w {
            Err(WitnessError::UnboundedGapFamily(_)) if redrawn < 1000 => redrawn += 1,
            Err(e) => return Err(e.to_string()),
            Ok(w) => {
                let cert = Certificate::Sigma {
                    variant: sigma_variant(w.kind).into(),
                    a: a.to_string(),
                    family: bs.iter().map(|b| b.to_string()).collect(),
                    maps: w.maps.iter().map(|m| m.to_string()).collect(),
                    gaps: w.gaps.iter().map(gap_text).collect(),
                    union: w.union.to_string(),
                };
                return Ok((a, bs, cert, redrawn));
            }
        }
    }
}

fn sigma(sc: &Scenario) -> Result<Vec<CheckRecord>, CliError> {
    let inst = sc.instance()?;
    if !matches!(inst, Instance::WellOrderedQ | Instance::WellOrderedBoundedBelowQ) {
        return Err(CliError::Invalid(format!("sigma witnesses need a well-ordered instance, got {}", inst.label())));
    }
    let len = sc.horizon.max(1);
    Ok((0..sc.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(sc.seed, i);
            let id = format!("sigma-{i:05}");
            match sigma_input(&inst, &mut rng, len) {
                Ok((a, _, cert, redrawn)) => {
                    let mut r = checked(id, format!("{len} sets moved over {a} into one well-ordered union"), SIGMA, Ok(cert));
                    if redrawn > 0 {
                        r.note = Some(format!("{redrawn} inputs with a shared left limit redrawn"));
                    }
                    r
                }
                Err(e) => checked(id, "sigma witness".into(), SIGMA, Err(e)),
            }
        })
        .collect())
}

fn rank(sc: &Scenario) -> Result<Vec<CheckRecord>, CliError> {
    let inst = sc.instance()?;
    if inst != Instance::CountableClosedQ {
        return Err(CliError::Invalid("rank refutation runs on CountableClosedQ".into()));
    }
    let per: Vec<Vec<CheckRecord>> = (0..sc.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(sc.seed, i);
            let b = inst.sample_ideal_with(&mut rng, 3);
            let refute = refute_cofinal_countableclosed(&blocks_of(b.clone())).map_err(s).map(|r| Certificate::Rank {
                b: r.b.to_string(),
                c: r.c.to_string(),
                rank_b: r.rank_b,
                rank_c: r.rank_c,
            });
            let s0 = inst.sample_ideal_with(&mut rng, 3);
            let g = inst.sample_group_with(&mut rng, 3);
            let image = inst.act(&g, &s0).map_err(s).map(|img| Certificate::RankImage {
                s: s0.to_string(),
                gamma: g.to_string(),
                rank: blocks_of(s0.clone()).cb_rank(),
                image: img.to_string(),
            });
            let u = inst.sample_ideal_with(&mut rng, 3);
            let pair = inst.union(&s0, &u).map_err(s).map(|t| Certificate::RankPair {
                s: s0.to_string(),
                rank_s: blocks_of(s0.clone()).cb_rank(),
                rank_t: blocks_of(t.clone()).cb_rank(),
                t: t.to_string(),
            });
            vec![
                checked(format!("rank-{i:05}-refute"), format!("no image of {b} covers a set of higher rank"), RANK, refute),
                checked(format!("rank-{i:05}-image"), "rank is preserved by the group".into(), RANK, image),
                checked(format!("rank-{i:05}-monotone"), "rank is monotone under inclusion".into(), RANK, pair),
            ]
        })
        .collect();
    Ok(per.into_iter().flatten().collect())
}

fn degree(sc: &Scenario) -> Result<usize, CliError> {
    match sc.instance()? {
        Instance::FiniteSym { n, .. } => Ok(n),
        other => Err(CliError::Invalid(format!("needs a finite symmetric instance, got {}", other.label()))),
    }
}

fn simplicity(sc: &Scenario) -> Result<Vec<CheckRecord>, CliError> {
    let n = degree(sc)?;
    let mut pairs = Vec::new();
    for mb in 0u64..1 << n {
        if (n - mb.count_ones() as usize) < 2 {
            continue;
        }
        // every submask of mb
        let mut ma = mb;
        loop {
            let set = |m: u64| (0..n).filter(|i| m >> i & 1 == 1).collect::<BTreeSet<usize>>();
            pairs.push((set(ma), set(mb)));
            if ma == 0 {
                break;
            }
            ma = (ma - 1) & mb;
        }
    }
    pairs.sort();
    Ok(pairs
        .par_iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let cert = Certificate::Simplicity { n, a: a.clone(), b: b.clone() };
            checked(format!("simple-{i:05}"), format!("closure of pstab({b:?}) in pstab({a:?}) is everything"), SIMPLE, Ok(cert))
        })
        .collect())
}

fn factorization(sc: &Scenario) -> Result<Vec<CheckRecord>, CliError> {
    let n = degree(sc)?;
    Ok((0..sc.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(sc.seed, i);
            let mut pts: Vec<usize> = (0..n).collect();
            pts.shuffle(&mut rng);
            let nb = rng.gen_range(0..=(n / 3).min(4));
            let na = rng.gen_range(0..=nb);
            let b: BTreeSet<usize> = pts[..nb].iter().copied().collect();
            let a: BTreeSet<usize> = pts[..na].iter().copied().collect();
            let free: Vec<usize> = (0..n).filter(|x| !a.contains(x)).collect();
            let mut img = free.clone();
            img.shuffle(&mut rng);
            let mut map: Vec<usize> = (0..n).collect();
            for (x, y) in free.into_iter().zip(img) {
                map[x] = y;
            }
            let g = FinitePermutation::from_images(map).expect("bijection");
            let cert = conjugate_factorization(&g, &a, &b, n).map_err(s).map(|w| Certificate::Factorization {
                target: w.target.to_string(),
                a: w.a,
                b: w.b,
                factors: w
                    .factors
                    .iter()
                    .map(|f| FactorRecord { conjugator: f.conjugator.to_string(), core: f.core.to_string(), fixes: f.fixes.clone() })
                    .collect(),
            });
            checked(format!("factor-{i:05}"), format!("{g} splits over a = {a:?}, b = {b:?}"), FACTOR, cert)
        })
        .collect())
}

pub fn strategy_one(name: &str) -> Result<Box<dyn StrategyI>, CliError> {
    let (head, arg) = name.split_once(':').unwrap_or((name, ""));
    let num = |d: usize| if arg.is_empty() { Ok(d) } else { arg.parse().map_err(|_| CliError::Strategy(name.into())) };
    Ok(match head {
        "random-I" => Box::new(random_strategy_i(num(2)?)),
        "interleave-I" => Box::new(interleave_strategy_i()),
        "stratified-I" => {
            let ks: Result<Vec<usize>, _> = arg.split(',').map(|t| t.trim().parse()).collect();
            Box::new(stratified_strategy_i(ks.map_err(|_| CliError::Strategy(name.into()))?))
        }
        _ => return Err(CliError::Strategy(name.into())),
    })
}

pub fn strategy_two(name: &str) -> Result<Box<dyn StrategyII>, CliError> {
    let (head, arg) = name.split_once(':').unwrap_or((name, ""));
    let num = |d: usize| if arg.is_empty() { Ok(d) } else { arg.parse().map_err(|_| CliError::Strategy(name.into())) };
    Ok(match head {
        "random-II" => Box::new(random_strategy_ii(num(2)?)),
        "trivial-II" => Box::new(trivial_strategy_ii()),
        "cofinal-II" => Box::new(cofinal_strategy_ii()),
        _ => return Err(CliError::Strategy(name.into())),
    })
}

fn player_text(p: Player) -> String {
    p.to_string()
}

/// Play one game and certify it. Cofinal play for II must keep the outcome
/// in the ideal; interleaving play for I must raise the rank every 4 rounds.
pub fn play_one(inst: &Instance, strategies: &Strategies, horizon: usize, seed: u64) -> Result<Certificate, CliError> {
    let mut one = strategy_one(&strategies.one)?;
    let mut two = strategy_two(&strategies.two)?;
    let (t, _) = run_game(inst, one.as_mut(), two.as_mut(), horizon, seed, DEFAULT_MOVE_CAP);
    let rounds = t
        .rounds
        .iter()
        .map(|r| RoundRecord {
            a: r.a.to_string(),
            gamma: r.gamma.to_string(),
            evidence: r
                .evidence
                .iter()
                .map(|(p, e)| EvidenceEntry {
                    player: player_text(*p),
                    evidence: match e {
                        RoundEvidence::Cover { certificate, .. } => {
                            RoundEvidenceRecord::Cover { certificate: LargeRecord::of(certificate) }
                        }
                        RoundEvidence::Stratified { threshold, accumulated_size } => {
                            RoundEvidenceRecord::Stratified { threshold: *threshold, accumulated_size: *accumulated_size }
                        }
                        RoundEvidence::Interleave { holds, cb_rank, accumulated_size } => RoundEvidenceRecord::Interleave {
                            holds: *holds,
                            cb_rank: *cb_rank,
                            accumulated_size: *accumulated_size,
                        },
                    },
                })
                .collect(),
        })
        .collect();
    let head = |s: &str| s.split(':').next().unwrap_or("").to_string();
    Ok(Certificate::Transcript(Box::new(TranscriptRecord {
        instance: InstanceSpec::of(inst),
        strategies: strategies.clone(),
        seed,
        horizon,
        move_cap: t.move_cap,
        rounds,
        accumulated: t.accumulated.to_string(),
        forfeit: t.forfeit.map(|f| FaultRecord { round: f.round, player: player_text(f.player), reason: f.reason }),
        demands: GameDemands {
            outcome_in_ideal: head(&strategies.two) == "cofinal-II",
            rank_window: (head(&strategies.one) == "interleave-I").then_some(4),
        },
    })))
}

fn play(sc: &Scenario) -> Result<Vec<CheckRecord>, CliError> {
    let inst = sc.instance()?;
    let st = sc.strategies.clone().expect("validated");
    strategy_one(&st.one)?;
    strategy_two(&st.two)?;
    Ok((0..sc.trials.max(1))
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(sc.seed, i as u64);
            let cert = play_one(&inst, &st, sc.horizon, seed).map_err(s);
            let claim = format!("{} vs {} on {} for {} rounds", st.one, st.two, inst.label(), sc.horizon);
            checked(format!("game-{i:05}"), claim, GAME, cert)
        })
        .collect())
}

/// A nonempty set with a support of size at most 2: an atom, a small set of
/// atoms, or an ordered pair of atoms.
fn small_supported(rng: &mut ChaCha8Rng, n: usize) -> HFSet {
    let x = HFSet::atom(rng.gen_range(0..n));
    let y = HFSet::atom(rng.gen_range(0..n));
    match rng.gen_range(0..3) {
        0 => HFSet::set([x]),
        1 => HFSet::set([x, y]),
        _ => HFSet::pair(x, y),
    }
}

fn selector_cert(inst: &Instance, rng: &mut ChaCha8Rng, budget: usize) -> Result<Certificate, String> {
    let Instance::FiniteSym { n, .. } = inst else { return Err(format!("selectors run on FiniteSym, not {}", inst.label())) };
    let a = inst.sample_ideal_with(rng, 2);
    let gens = pstab_generators(inst, &a).map_err(s)?;
    let mut members = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        members.push(HFSet::set(orbit(inst, &gens, &small_supported(rng, *n)).map_err(s)?));
    }
    let family = HFSet::set(members);
    let (_, cert) = a_large(inst, &a).map_err(s)?;
    let (f, _) = choice_selector(inst, &family, &a, &cert, budget).map_err(s)?;
    Ok(Certificate::Selector {
        instance: InstanceSpec::of(inst),
        family: family.to_string(),
        certificate: LargeRecord::of(&cert),
        selector: f.to_string(),
    })
}

fn support(sc: &Scenario) -> Result<Vec<CheckRecord>, CliError> {
    let inst = sc.instance()?;
    let n = degree(sc)?;
    let budget = sc.budget.max(1);
    let per: Vec<Vec<CheckRecord>> = (0..sc.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(sc.seed, i);
            let found = (0..100).find_map(|_| {
                let x = sample_hf(&inst, &mut rng, 3, 2).ok()?;
                let b = find_support(&inst, &x, budget).ok()??;
                Some((x, b))
            });
            let (support, moved) = match found {
                Some((x, b)) => {
                    let g = inst.sample_group_with(&mut rng, 3);
                    let spec = InstanceSpec::of(&inst);
                    (
                        Ok(Certificate::Support { instance: spec.clone(), set: x.to_string(), support: b.to_string() }),
                        Ok(Certificate::SupportMove { instance: spec, set: x.to_string(), support: b.to_string(), gamma: g.to_string() }),
                    )
                }
                None => (Err("no support within budget".to_string()), Err("no support within budget".to_string())),
            };
            vec![
                checked(format!("support-{i:05}-found"), "the found set supports the sample".into(), SUPPORT, support),
                checked(format!("support-{i:05}-moved"), "γ·b supports γ·x".into(), SUPPORT, moved),
                checked(format!("support-{i:05}-selector"), "the selector is supported by the large set".into(), SELECT, selector_cert(&inst, &mut rng, budget)),
            ]
        })
        .collect();
    let mut out: Vec<CheckRecord> = per.into_iter().flatten().collect();
    for m in 1..=n.min(6) {
        let claim = format!("definable closure laws hold on all subsets of {m} points");
        out.push(checked(format!("closure-{m}"), claim, SUPPORT, Ok(Certificate::ClosureLaws { n: m })));
    }
    Ok(out)
}

fn refutations(inst: &Instance, bs: &[Elem]) -> Vec<(Certificate, String)> {
    let Instance::AbelianGrid { m, modulus } = inst else { return Vec::new() };
    let mut out = Vec::new();
    for b in bs {
        for f in selectors(*m, *modulus) {
            let r = dynideal::hfa::abelian_refuter(inst, &f, b);
            let claim = format!("selector {f} over b = {b} is moved on {}", inst.label());
            let gamma = r.map(|r| r.gamma.to_string()).unwrap_or_else(|e| format!("none: {e}"));
            out.push((
                Certificate::Refutation { instance: InstanceSpec::of(inst), candidate: f.to_string(), b: b.to_string(), gamma },
                claim,
            ));
        }
    }
    out
}

fn abelian(sc: &Scenario) -> Result<Vec<CheckRecord>, CliError> {
    let inst = sc.instance()?;
    let Instance::AbelianGrid { m, modulus } = inst else {
        return Err(CliError::Invalid(format!("abelian checks need AbelianGrid, got {}", inst.label())));
    };
    let budget = sc.budget.max(1);
    let mut out: Vec<CheckRecord> = (0..sc.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(sc.seed, i);
            let cert = (|| {
                let a = inst.sample_ideal_with(&mut rng, 2);
                let gens = pstab_generators(&inst, &a).map_err(s)?;
                let x = sample_hf(&inst, &mut rng, 2, 2).map_err(s)?;
                let set = HFSet::set(orbit(&inst, &gens, &x).map_err(s)?);
                Ok(Certificate::Orbits { instance: InstanceSpec::of(&inst), set: set.to_string(), a: a.to_string(), budget })
            })();
            checked(format!("orbits-{i:05}"), "pstab(d) fixes the orbit of each member".into(), ABELIAN, cert)
        })
        .collect();
    let small = Instance::AbelianGrid { m: 2, modulus: 2 };
    let mut cases = refutations(&small, &[small.empty()]);
    let columns: Vec<Elem> = (0..m).map(|c| Elem::Cells((0..modulus).map(|z| (c, z)).collect())).collect();
    cases.extend(refutations(&inst, &columns));
    for (i, (cert, claim)) in cases.into_iter().enumerate() {
        out.push(checked(format!("refute-{i:05}"), claim, ABELIAN, Ok(cert)));
    }
    Ok(out)
}

fn shuffle_onto(labels: &BTreeSet<Label>, base: Label, rng: &mut ChaCha8Rng) -> BTreeMap<Label, Label> {
    let mut img: Vec<Label> = (0..labels.len() as Label).map(|i| base + i).collect();
    img.shuffle(rng);
    labels.iter().copied().zip(img).collect()
}

/// Random relabellings of a position that agree on the common part.
pub fn relabel_pair(a: &FinStructure, b: &FinStructure, rng: &mut ChaCha8Rng) -> (BTreeMap<Label, Label>, BTreeMap<Label, Label>) {
    let common: BTreeSet<Label> = a.universe().intersection(b.universe()).copied().collect();
    let phi = shuffle_onto(a.universe(), 100, rng);
    let mut psi: BTreeMap<Label, Label> = common.iter().map(|x| (*x, phi[x])).collect();
    let rest: BTreeSet<Label> = b.universe().difference(&common).copied().collect();
    psi.extend(shuffle_onto(&rest, 200, rng));
    (phi, psi)
}

pub const AMALGAM_SIGNATURES: [Signature; 3] = [Signature::PureSet, Signature::Ultrametric, Signature::VectorSpace { q: 2 }];

fn amalgamation(sc: &Scenario) -> Result<Vec<CheckRecord>, CliError> {
    let [ma, mb] = sc.sizes.unwrap_or([2, 2]);
    let positions: Vec<(FinStructure, FinStructure)> =
        AMALGAM_SIGNATURES.iter().flat_map(|sig| amalgamation_positions(*sig, ma, mb)).collect();
    let mut out: Vec<CheckRecord> = positions
        .par_iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let mut rng = rng_for(sc.seed, i);
            let (phi, psi) = relabel_pair(a, b, &mut rng);
            let cert = amalgam_certificate(a, b, phi, psi).map_err(s);
            checked(format!("amalgam-{i:05}"), format!("amalgam of {a} and {b}"), AMALGAM, cert)
        })
        .collect();
    let cert = no_canonical_amalgam_search(Signature::QuadSelector, 3, 1).map_err(s).map(|r| Certificate::Impossibility {
        signature: r.signature.to_string(),
        a_size: r.a_size,
        b_size: r.b_size,
        cases: r.cases.into_iter().map(|c| CaseRecord { table: c.table, violation: c.violation.map(|(x, y)| (pairs(&x), pairs(&y))) }).collect(),
    });
    out.push(checked("impossible-quad-selector-3-1".into(), "no amalgam table is invariant".into(), IMPOSSIBLE, cert));
    let hosts = [(pure_host(12), true), (vector_host(2, 6), true), (tree_host(7), false)];
    for (h, (host, grow)) in hosts.iter().enumerate() {
        let runs: Vec<CheckRecord> = (0..sc.trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(sc.seed ^ 0xc0, h * 1_000_000 + i);
                let (a, b, pi) = random_case(host, &mut rng);
                let cert = conjugation_witness(host, &a, &b, &pi, *grow).map_err(s).map(|w| {
                    Certificate::Conjugation {
                        host: HostSpec::of(&w.host),
                        a: w.a,
                        b: w.b,
                        pi: pairs(&w.pi),
                        e: w.e,
                        f: w.f,
                        theta: pairs(&w.theta),
                        delta: pairs(&w.delta),
                        gamma: pairs(&w.gamma),
                        kappa: pairs(&w.kappa),
                    }
                });
                checked(format!("conjugation-{}-{i:05}", host.signature()), format!("π on {b:?} over {a:?} splits"), CONJUGATE, cert)
            })
            .collect();
        out.extend(runs);
    }
    Ok(out)
}
