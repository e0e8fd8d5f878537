//! The cross-module invariant suite behind `lambda-sieve verify`.
//!
//! Every invariant runs at a fixed bound and reports how many cases it
//! checked together with a capped list of counterexamples.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussfact::{
    cd_congruence_check, exceptional_bernoulli, exceptional_direct, exceptional_fq,
    exceptional_general, exceptional_ratio, gauss_factorial, xi_values,
};
use crate::jacobi::{
    cornacchia_gold, cornacchia_gold_with, gold_oracle, lambda_criterion_fq,
    lambda_criterion_jacobi_with, JacobiContext, Normalization, RootChoice,
};
use crate::modmath::{
    classify, fermat_quotient, fermat_quotient_table, inv_mod, prime_factors, rational_residue,
    sieve_primes, teichmuller_lift, wilson_quotient, PrimalityStatus, PrimeRange,
};
use crate::pell::{
    cd_implies_nontrivial, cd_search, pell_identity_holds, pell_value, PellSequence,
};
use crate::quadfields::{
    class_number_charsum, class_number_forms, is_square_free, make_field, maximal_scan, s_set,
    QuadField,
};
use crate::scan::try_ordered_map;
use crate::specialnums::{
    bernoulli, bernoulli_difference_with, bernoulli_mod, euler_bernoulli_identity, euler_criterion,
    euler_exact, euler_mod, glaisher_bernoulli_identity, glaisher_criterion, glaisher_exact,
    glaisher_mod, glaisher_row, raabe_identity, ExactSequence, ResidueSequence,
};
use crate::{ExactRational, PrimePower, Residue};

/// Counterexamples kept per invariant; further failures are only counted.
pub const MAX_COUNTEREXAMPLES: usize = 10;

/// Fields covered by the route-agreement invariant.
pub const ROUTE_FIELDS: [u64; 5] = [1, 2, 3, 5, 6];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Comma-separated module names, invariant names or `module.invariant`.
    pub only: Option<String>,
    pub workers: usize,
    pub normalization: Normalization,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            only: None,
            workers: 1,
            normalization: Normalization::Standard,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantOutcome {
    pub module: String,
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    pub failures: u64,
    pub counterexamples: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub outcomes: Vec<InvariantOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn outcome(&self, name: &str) -> Option<&InvariantOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }
}

#[derive(Default)]
struct Tally {
    checked: u64,
    failures: u64,
    counterexamples: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(describe());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failures += other.failures;
        let room = MAX_COUNTEREXAMPLES - self.counterexamples.len();
        self.counterexamples
            .extend(other.counterexamples.into_iter().take(room));
    }
}

/// Runs `f` on every item on the worker pool; each call returns its own tally.
fn per_item<T, F>(items: &[T], workers: usize, f: F) -> Result<Tally>
where
    T: Sync,
    F: Fn(&T) -> Result<Tally> + Sync + Send,
{
    let parts = try_ordered_map(items, workers, f)?;
    let mut total = Tally::default();
    for part in parts {
        total.merge(part);
    }
    Ok(total)
}

/// One check per item: `f` returns `None` on success or a counterexample.
fn each<T, F>(items: &[T], workers: usize, f: F) -> Result<Tally>
where
    T: Sync,
    F: Fn(&T) -> Result<Option<String>> + Sync + Send,
{
    per_item(items, workers, |item| {
        let mut t = Tally::default();
        let outcome = f(item)?;
        t.record(outcome.is_none(), || outcome.unwrap_or_default());
        Ok(t)
    })
}

fn primes(lower: u64, upper: u64) -> Vec<u64> {
    sieve_primes(PrimeRange::new(lower, upper, None).expect("valid range")).collect()
}

fn primes_one_mod(m: u64, lower: u64, upper: u64) -> Vec<u64> {
    sieve_primes(PrimeRange::new(lower, upper, Some((m, 1))).expect("valid range"))
        .filter(|&p| p > m)
        .collect()
}

fn fail_if(bad: bool, describe: impl FnOnce() -> String) -> Option<String> {
    bad.then(describe)
}

type Check = fn(&VerifyConfig) -> Result<Tally>;

struct Invariant {
    module: &'static str,
    name: &'static str,
    check: Check,
}

const INVARIANTS: &[Invariant] = &[
    Invariant {
        module: "modmath",
        name: "fq_logarithmic",
        check: fq_logarithmic,
    },
    Invariant {
        module: "modmath",
        name: "fq_shift",
        check: fq_shift,
    },
    Invariant {
        module: "modmath",
        name: "unit_decomposition",
        check: unit_decomposition,
    },
    Invariant {
        module: "modmath",
        name: "teichmuller",
        check: teichmuller,
    },
    Invariant {
        module: "modmath",
        name: "fq_table_vs_direct",
        check: fq_table_vs_direct,
    },
    Invariant {
        module: "modmath",
        name: "wilson_quotient",
        check: wilson_vs_sum,
    },
    Invariant {
        module: "gaussfact",
        name: "direct_vs_fq",
        check: direct_vs_fq,
    },
    Invariant {
        module: "gaussfact",
        name: "m3_m6_equivalence",
        check: m3_m6_equivalence,
    },
    Invariant {
        module: "gaussfact",
        name: "half_factorial_wilson",
        check: half_factorial_wilson,
    },
    Invariant {
        module: "gaussfact",
        name: "cd_congruence",
        check: cd_congruence,
    },
    Invariant {
        module: "gaussfact",
        name: "wilson_theorem",
        check: wilson_theorem,
    },
    Invariant {
        module: "gaussfact",
        name: "three_methods",
        check: three_methods,
    },
    Invariant {
        module: "specialnums",
        name: "glaisher_vanishing",
        check: glaisher_vanishing,
    },
    Invariant {
        module: "specialnums",
        name: "euler_bernoulli",
        check: euler_bernoulli,
    },
    Invariant {
        module: "specialnums",
        name: "glaisher_vs_fq",
        check: glaisher_vs_fq,
    },
    Invariant {
        module: "specialnums",
        name: "euler_vs_fq",
        check: euler_vs_fq,
    },
    Invariant {
        module: "specialnums",
        name: "modular_vs_exact",
        check: modular_vs_exact,
    },
    Invariant {
        module: "specialnums",
        name: "sequence_shape",
        check: sequence_shape,
    },
    Invariant {
        module: "specialnums",
        name: "glaisher_bernoulli",
        check: glaisher_bernoulli,
    },
    Invariant {
        module: "specialnums",
        name: "raabe",
        check: raabe,
    },
    Invariant {
        module: "specialnums",
        name: "bernoulli_routes",
        check: bernoulli_routes,
    },
    Invariant {
        module: "quadfields",
        name: "charsum_vs_forms",
        check: charsum_vs_forms,
    },
    Invariant {
        module: "quadfields",
        name: "maximal_residues",
        check: maximal_residues,
    },
    Invariant {
        module: "quadfields",
        name: "character_table",
        check: character_table,
    },
    Invariant {
        module: "jacobi",
        name: "norm_relation",
        check: norm_relation,
    },
    Invariant {
        module: "jacobi",
        name: "psi_order",
        check: psi_order,
    },
    Invariant {
        module: "jacobi",
        name: "root_choice",
        check: root_choice,
    },
    Invariant {
        module: "jacobi",
        name: "route_agreement",
        check: route_agreement,
    },
    Invariant {
        module: "pell",
        name: "recurrence_oracle",
        check: recurrence_oracle,
    },
    Invariant {
        module: "pell",
        name: "pell_identity",
        check: pell_identity,
    },
    Invariant {
        module: "pell",
        name: "converse_witness",
        check: converse_witness,
    },
    Invariant {
        module: "pell",
        name: "composite_indices",
        check: composite_indices,
    },
    Invariant {
        module: "pell",
        name: "pell_primes_exceptional",
        check: pell_primes_exceptional,
    },
];

/// `(module, invariant)` for every registered invariant, in run order.
pub fn invariant_names() -> Vec<(&'static str, &'static str)> {
    INVARIANTS.iter().map(|i| (i.module, i.name)).collect()
}

fn selected(filter: &[String], inv: &Invariant) -> bool {
    filter.is_empty()
        || filter.iter().any(|f| {
            f == inv.module || f == inv.name || *f == format!("{}.{}", inv.module, inv.name)
        })
}

/// Runs the selected invariants. An unknown filter entry is an error, so a
/// typo cannot silently select nothing.
pub fn run(config: &VerifyConfig) -> Result<VerifyReport> {
    ensure_workers(config.workers)?;
    let filter: Vec<String> = config
        .only
        .as_deref()
        .unwrap_or("")
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    for f in &filter {
        if !INVARIANTS
            .iter()
            .any(|i| selected(std::slice::from_ref(f), i))
        {
            return Err(Error::Precondition(format!("unknown verify filter {f:?}")));
        }
    }
    let mut outcomes = Vec::new();
    for inv in INVARIANTS.iter().filter(|i| selected(&filter, i)) {
        let tally = (inv.check)(config)?;
        outcomes.push(InvariantOutcome {
            module: inv.module.to_string(),
            name: inv.name.to_string(),
            passed: tally.failures == 0 && tally.checked > 0,
            checked: tally.checked,
            failures: tally.failures,
            counterexamples: tally.counterexamples,
        });
    }
    Ok(VerifyReport { outcomes })
}

fn ensure_workers(workers: usize) -> Result<()> {
    if workers == 0 {
        return Err(Error::Precondition(
            "worker count must be at least 1".into(),
        ));
    }
    Ok(())
}

// ---- modmath ----

/// `q_p(a)` for `0 <= a < p^2` by direct exponentiation; zero where `p | a`.
fn quotient_table(p: u64) -> Vec<u64> {
    (0..p * p)
        .map(|a| fermat_quotient(a as i64, p).map_or(0, |r| r.value()))
        .collect()
}

fn fq_logarithmic(c: &VerifyConfig) -> Result<Tally> {
    per_item(&primes(3, 100), c.workers, |&p| {
        let p2 = p * p;
        let q = quotient_table(p);
        let mut t = Tally::default();
        for a in (1..p2).filter(|a| a % p != 0) {
            for b in (1..p2).step_by(7).filter(|b| b % p != 0) {
                let (qa, qb) = (q[a as usize], q[b as usize]);
                let prod = q[(a * b % p2) as usize];
                let quot = q[(a * inv_mod(b, p2).expect("unit") % p2) as usize];
                t.record(prod == (qa + qb) % p && quot == (qa + p - qb) % p, || {
                    format!("p={p} a={a} b={b}")
                });
            }
        }
        Ok(t)
    })
}

fn fq_shift(c: &VerifyConfig) -> Result<Tally> {
    per_item(&primes(3, 100), c.workers, |&p| {
        let q = quotient_table(p);
        let mut t = Tally::default();
        for a in (1..p * p - p).filter(|a| a % p != 0) {
            let inv = inv_mod(a % p, p).expect("unit");
            t.record(q[(a + p) as usize] == (q[a as usize] + p - inv) % p, || {
                format!("p={p} a={a}")
            });
        }
        Ok(t)
    })
}

fn unit_decomposition(c: &VerifyConfig) -> Result<Tally> {
    per_item(&primes(3, 50), c.workers, |&p| {
        let m2 = PrimePower::new(p, 2)?;
        let mut t = Tally::default();
        for b0 in 1..p {
            let lift = Residue::from_u64(b0, m2).pow(p);
            let q0 = fermat_quotient(b0 as i64, p)?.value();
            for b1 in 0..p {
                let b = Residue::from_u64(b0 + b1 * p, m2);
                let s = (b1 * inv_mod(b0, p).expect("unit") + p - q0) % p;
                t.record(b == lift * Residue::from_u64(1 + s * p, m2), || {
                    format!("p={p} b0={b0} b1={b1}")
                });
            }
        }
        Ok(t)
    })
}

fn teichmuller(c: &VerifyConfig) -> Result<Tally> {
    per_item(&primes(3, 100), c.workers, |&p| {
        let mut t = Tally::default();
        for k in 1..=3 {
            for a in 1..p {
                let w = teichmuller_lift(a as i64, p, k)?;
                t.record(w.value() % p == a && w.pow(p - 1).is_one(), || {
                    format!("p={p} a={a} k={k}")
                });
            }
        }
        Ok(t)
    })
}

fn fq_table_vs_direct(c: &VerifyConfig) -> Result<Tally> {
    per_item(&primes(3, 500), c.workers, |&p| {
        let bound = p * p - 1;
        let table = fermat_quotient_table(p, bound)?;
        let mut t = Tally::default();
        for a in (1..=bound).filter(|a| a % p != 0) {
            let direct = fermat_quotient(a as i64, p)?.value();
            t.record(table.get(a) == Some(direct), || format!("p={p} a={a}"));
        }
        Ok(t)
    })
}

/// `w_p ≡ sum_{a<p} q_p(a)` (mod p), from `(p-1)! = prod a`.
fn wilson_vs_sum(c: &VerifyConfig) -> Result<Tally> {
    each(&primes(3, 200), c.workers, |&p| {
        let w = wilson_quotient(p)?.value();
        let sum = fermat_quotient_table(p, p - 1)?.prefix_sum(p - 1);
        Ok(fail_if(w != sum, || format!("p={p}: w_p={w}, sum={sum}")))
    })
}

// ---- gaussfact ----

fn direct_vs_fq(c: &VerifyConfig) -> Result<Tally> {
    let cases: Vec<(u64, u64)> = [3u64, 4, 6]
        .iter()
        .flat_map(|&m| primes_one_mod(m, 3, 2000).into_iter().map(move |p| (p, m)))
        .collect();
    each(&cases, c.workers, |&(p, m)| {
        let direct = exceptional_direct(p, m, 1)?;
        let fq = exceptional_fq(p, m)?;
        Ok(fail_if(
            direct.verdict != fq.verdict || direct.xi != fq.xi,
            || {
                format!(
                    "p={p} m={m}: direct {} (xi {}), fq {} (xi {})",
                    direct.verdict,
                    direct.xi.value(),
                    fq.verdict,
                    fq.xi.value()
                )
            },
        ))
    })
}

fn m3_m6_equivalence(c: &VerifyConfig) -> Result<Tally> {
    each(&primes_one_mod(6, 3, 2000), c.workers, |&p| {
        let (a, b) = (exceptional_fq(p, 3)?.verdict, exceptional_fq(p, 6)?.verdict);
        Ok(fail_if(a != b, || format!("p={p}: m=3 {a}, m=6 {b}")))
    })
}

fn half_factorial_wilson(c: &VerifyConfig) -> Result<Tally> {
    each(&primes(3, 2000), c.workers, |&p| {
        let v = exceptional_direct(p, 2, 1)?;
        Ok(fail_if(!v.verdict, || {
            format!("p={p}: xi={}", v.xi.value())
        }))
    })
}

fn cd_congruence(c: &VerifyConfig) -> Result<Tally> {
    let cases: Vec<(u64, u32)> = primes_one_mod(6, 3, 100)
        .into_iter()
        .flat_map(|p| (1..=3).map(move |n| (p, n)))
        .collect();
    each(&cases, c.workers, |&(p, n)| {
        Ok(fail_if(!cd_congruence_check(p, n)?, || {
            format!("p={p} n={n}")
        }))
    })
}

fn wilson_theorem(c: &VerifyConfig) -> Result<Tally> {
    each(&primes(3, 2000), c.workers, |&p| {
        let f = gauss_factorial(p - 1, p, PrimePower::new(p, 1)?).value();
        Ok(fail_if(f != p - 1, || format!("p={p}: (p-1)! ≡ {f}")))
    })
}

fn three_methods(c: &VerifyConfig) -> Result<Tally> {
    let cases: Vec<(u64, u64)> = [3u64, 4, 6]
        .iter()
        .flat_map(|&m| primes_one_mod(m, 3, 300).into_iter().map(move |p| (p, m)))
        .collect();
    each(&cases, c.workers, |&(p, m)| {
        let d = exceptional_direct(p, m, 1)?;
        let f = exceptional_fq(p, m)?;
        let b = exceptional_bernoulli(p, m)?;
        let same = d.xi == f.xi && f.xi == b.xi && d.verdict == f.verdict && f.verdict == b.verdict;
        Ok(fail_if(!same, || {
            format!(
                "p={p} m={m}: xi direct {}, fq {}, bernoulli {}",
                d.xi.value(),
                f.xi.value(),
                b.xi.value()
            )
        }))
    })
}

// ---- specialnums ----

fn glaisher_vanishing(c: &VerifyConfig) -> Result<Tally> {
    each(&primes_one_mod(3, 7, 500), c.workers, |&p| {
        let row = glaisher_row(p)?;
        Ok(fail_if(row.mod_p != 0, || {
            format!("p={p}: G_(p-1) ≡ {} (mod p)", row.mod_p)
        }))
    })
}

fn euler_bernoulli(c: &VerifyConfig) -> Result<Tally> {
    each(&primes_one_mod(4, 5, 200), c.workers, |&p| {
        Ok(fail_if(!euler_bernoulli_identity(p)?, || format!("p={p}")))
    })
}

fn glaisher_vs_fq(c: &VerifyConfig) -> Result<Tally> {
    each(&primes_one_mod(3, 7, 2000), c.workers, |&p| {
        let (g, f) = (glaisher_criterion(p)?, exceptional_fq(p, 3)?.verdict);
        Ok(fail_if(g != f, || format!("p={p}: glaisher {g}, fq {f}")))
    })
}

fn euler_vs_fq(c: &VerifyConfig) -> Result<Tally> {
    each(&primes_one_mod(4, 5, 2000), c.workers, |&p| {
        let (e, f) = (euler_criterion(p)?, exceptional_fq(p, 4)?.verdict);
        Ok(fail_if(e != f, || format!("p={p}: euler {e}, fq {f}")))
    })
}

const SEQUENCE_INDEX_LIMIT: usize = 200;
const SEQUENCE_PRIMES: [u64; 7] = [5, 7, 11, 13, 101, 211, 223];

fn compare_sequences(
    label: &str,
    exact: &ExactSequence,
    modular: &ResidueSequence,
    modulus: PrimePower,
    t: &mut Tally,
) {
    for (n, (e, r)) in exact.values().iter().zip(modular.values()).enumerate() {
        if let Ok(expected) = rational_residue(e, modulus) {
            t.record(expected == *r, || {
                format!(
                    "{label} n={n} mod {}^2: exact {}, modular {}",
                    modulus.p(),
                    expected.value(),
                    r.value()
                )
            });
        }
    }
}

fn modular_vs_exact(c: &VerifyConfig) -> Result<Tally> {
    let n = SEQUENCE_INDEX_LIMIT;
    let euler_e = euler_exact(n)?;
    let glaisher_e = glaisher_exact(n)?;
    let bernoulli_e = crate::specialnums::bernoulli_exact(n)?;
    per_item(&SEQUENCE_PRIMES, c.workers, |&p| {
        let modulus = PrimePower::new(p, 2)?;
        let mut t = Tally::default();
        compare_sequences("E", &euler_e, &euler_mod(n, modulus)?, modulus, &mut t);
        compare_sequences(
            "G",
            &glaisher_e,
            &glaisher_mod(n, modulus)?,
            modulus,
            &mut t,
        );
        // B_n mod p^2 leaves the p-integers at n = p - 1
        let nb = n.min(p as usize - 2);
        compare_sequences(
            "B",
            &bernoulli_e,
            &bernoulli_mod(nb, modulus)?,
            modulus,
            &mut t,
        );
        Ok(t)
    })
}

/// Euler values are integers, odd-index Euler and Glaisher entries vanish,
/// and Glaisher denominators are powers of 3 from `n = 2` on.
fn sequence_shape(_: &VerifyConfig) -> Result<Tally> {
    let n = SEQUENCE_INDEX_LIMIT;
    let euler_e = euler_exact(n)?;
    let glaisher_e = glaisher_exact(n)?;
    let mut t = Tally::default();
    for (i, e) in euler_e.values().iter().enumerate() {
        t.record(e.is_integer() && (i % 2 == 0 || e.is_zero()), || {
            format!("E_{i} = {e}")
        });
    }
    for (i, g) in glaisher_e.values().iter().enumerate() {
        let mut den = g.denom().clone();
        while (&den % 3u32).is_zero() {
            den /= 3u32;
        }
        let ok = (i % 2 == 0 || g.is_zero()) && (i < 2 || den.is_one());
        t.record(ok, || format!("G_{i} = {g}"));
    }
    Ok(t)
}

const IDENTITY_LIMIT: usize = 60;

fn glaisher_bernoulli(c: &VerifyConfig) -> Result<Tally> {
    let ns: Vec<usize> = (0..=IDENTITY_LIMIT).collect();
    each(&ns, c.workers, |&n| {
        Ok(fail_if(!glaisher_bernoulli_identity(n)?, || {
            format!("n={n}")
        }))
    })
}

fn raabe(c: &VerifyConfig) -> Result<Tally> {
    let ns: Vec<usize> = (0..=IDENTITY_LIMIT).collect();
    each(&ns, c.workers, |&n| {
        Ok(fail_if(!raabe_identity(n)?, || format!("n={n}")))
    })
}

/// Exact `B_p` differences against the Fermat-quotient value for every
/// maximal field and split `p ≡ 1 (mod D)` up to 500.
fn bernoulli_routes(c: &VerifyConfig) -> Result<Tally> {
    let limit = crate::specialnums::EXACT_ROUTE_LIMIT;
    let table: Vec<ExactRational> = bernoulli(&(), limit as usize)?;
    let mut cases = Vec::new();
    for d in ROUTE_FIELDS {
        let field = make_field(d)?;
        for p in primes_one_mod(field.modulus(), 3, limit) {
            if field.class_number() % p != 0 {
                cases.push((field.clone(), p));
            }
        }
    }
    each(&cases, c.workers, |(field, p)| {
        let p = *p;
        let big_d = field.modulus();
        let xi = xi_values(p, &[big_d / 2, big_d])?;
        let fq = (xi[0].value() + 2 * (p - xi[1].value())) % p;
        let exact = bernoulli_difference_with(&table, p, big_d / 2)?;
        Ok(fail_if(exact != fq, || {
            format!("d={} p={p}: exact {exact}, fermat quotient {fq}", field.d())
        }))
    })
}

// ---- quadfields ----

fn charsum_vs_forms(c: &VerifyConfig) -> Result<Tally> {
    let ds: Vec<u64> = (2..=2000)
        .filter(|&d| d != 3 && is_square_free(d))
        .collect();
    each(&ds, c.workers, |&d| {
        let field = make_field(d)?;
        let a = class_number_charsum(&field)?;
        let b = class_number_forms(field.discriminant())?;
        Ok(fail_if(a != b, || format!("d={d}: charsum {a}, forms {b}")))
    })
}

fn maximal_residues(_: &VerifyConfig) -> Result<Tally> {
    let mut t = Tally::default();
    for d in maximal_scan(2000)? {
        let field = make_field(d)?;
        let big_d = field.modulus();
        let lower: Vec<u64> = (1..big_d / 2)
            .filter(|&i| crate::modmath::gcd(i, big_d) == 1)
            .collect();
        let all_one = lower
            .iter()
            .all(|&i| field.character().get(i as i64) == Some(1));
        t.record(all_one, || format!("d={d}: chi(i) != 1 below D/2"));
        let mut s1 = s_set(1, big_d);
        s1.sort_unstable();
        t.record(s1 == lower, || format!("d={d}: S_1(D) = {s1:?}"));
    }
    Ok(t)
}

fn character_table(c: &VerifyConfig) -> Result<Tally> {
    let ds: Vec<u64> = (1..=100).filter(|&d| is_square_free(d)).collect();
    per_item(&ds, c.workers, |&d| {
        let field = make_field(d)?;
        let big_d = field.modulus() as i64;
        let table = field.character();
        let mut t = Tally::default();
        let units: Vec<(u64, i8)> = table.iter().collect();
        for &(i, ci) in &units {
            t.record(table.get(big_d - i as i64) == Some(-ci), || {
                format!("d={d}: chi(D-{i})")
            });
            for &(j, cj) in &units {
                let ij = (i as i64 * j as i64) % big_d;
                t.record(table.get(ij) == Some(ci * cj), || {
                    format!("d={d}: chi({i}*{j})")
                });
            }
        }
        Ok(t)
    })
}

// ---- jacobi ----

const NORM_MODULI: [u64; 5] = [4, 6, 8, 20, 24];

fn norm_cases() -> Vec<(u64, u64)> {
    NORM_MODULI
        .iter()
        .flat_map(|&m| primes_one_mod(m, 3, 500).into_iter().map(move |p| (p, m)))
        .collect()
}

fn norm_relation(c: &VerifyConfig) -> Result<Tally> {
    per_item(&norm_cases(), c.workers, |&(p, big_d)| {
        let ctx = JacobiContext::new(p, big_d, c.normalization)?;
        let modulus = PrimePower::new(p, 2)?;
        let mut t = Tally::default();
        for i in (1..big_d as i64).filter(|&i| crate::modmath::gcd(i as u64, big_d) == 1) {
            let product = ctx.jacobi_sum(i) * ctx.jacobi_sum(-i);
            t.record(product == Residue::from_u64(p, modulus), || {
                format!("p={p} D={big_d} i={i}: product {}", product.value())
            });
        }
        Ok(t)
    })
}

fn psi_order(c: &VerifyConfig) -> Result<Tally> {
    each(&norm_cases(), c.workers, |&(p, big_d)| {
        let psi = JacobiContext::new(p, big_d, c.normalization)?.psi_of_generator();
        let full = psi.pow(big_d).is_one();
        let exact = prime_factors(big_d)
            .iter()
            .all(|&q| !psi.pow(big_d / q).is_one());
        Ok(fail_if(!(full && exact), || {
            format!("p={p} D={big_d}: psi(g)={}", psi.value())
        }))
    })
}

const CLASS_NUMBER_ONE: [u64; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

fn root_choice(c: &VerifyConfig) -> Result<Tally> {
    let mut cases = Vec::new();
    for d in CLASS_NUMBER_ONE {
        let field = make_field(d)?;
        for p in primes(3, 600) {
            if field.modulus() % p != 0 && crate::quadfields::chi(&field, p as i64) == 1 {
                cases.push((field.clone(), p));
            }
        }
    }
    each(&cases, c.workers, |(field, p)| {
        let p = *p;
        let a = cornacchia_gold_with(field, p, RootChoice::Principal)?.verdict;
        let b = cornacchia_gold_with(field, p, RootChoice::Conjugate)?.verdict;
        let g = gold_oracle(field, p, RootChoice::Conjugate)?.verdict;
        Ok(fail_if(a != b || a != g, || {
            format!(
                "d={} p={p}: principal {a}, conjugate {b}, brute force {g}",
                field.d()
            )
        }))
    })
}

fn route_verdicts(
    field: &QuadField,
    p: u64,
    norm: Normalization,
) -> Result<Vec<(&'static str, bool)>> {
    let big_d = field.modulus();
    let mut v = vec![
        (
            "jacobi",
            lambda_criterion_jacobi_with(field, p, norm)?.verdict,
        ),
        ("general", exceptional_general(p, field, 1)?),
        ("ratio", exceptional_ratio(p, big_d, 1)?),
        ("fermat_quotient", lambda_criterion_fq(field, p)?.verdict),
    ];
    if field.class_number() == 1 {
        v.push(("cornacchia", cornacchia_gold(field, p)?.verdict));
    } else {
        v.push((
            "gold_search",
            gold_oracle(field, p, RootChoice::Principal)?.verdict,
        ));
    }
    match field.d() {
        1 => {
            v.push(("direct_m4", exceptional_direct(p, 4, 1)?.verdict));
            v.push(("euler", euler_criterion(p)?));
        }
        3 => {
            v.push(("direct_m3", exceptional_direct(p, 3, 1)?.verdict));
            v.push(("glaisher", glaisher_criterion(p)?));
        }
        _ => {}
    }
    Ok(v)
}

fn route_agreement(c: &VerifyConfig) -> Result<Tally> {
    let mut cases = Vec::new();
    for d in ROUTE_FIELDS {
        let field = make_field(d)?;
        for p in primes_one_mod(field.modulus(), 3, 2000) {
            if field.class_number() % p != 0 {
                cases.push((field.clone(), p));
            }
        }
    }
    each(&cases, c.workers, |(field, p)| {
        let verdicts = route_verdicts(field, *p, c.normalization)?;
        let first = verdicts[0].1;
        Ok(fail_if(verdicts.iter().any(|&(_, v)| v != first), || {
            let parts: Vec<String> = verdicts.iter().map(|(n, v)| format!("{n}={v}")).collect();
            format!("d={} p={}: {}", field.d(), p, parts.join(" "))
        }))
    })
}

// ---- pell ----

const FIXED_POINT_DIGITS: u32 = 150;

/// `round(gamma^q + gamma^-q)` in fixed-point decimal arithmetic.
fn fixed_point_trace(q: u32) -> BigUint {
    let scale = BigUint::from(10u32).pow(FIXED_POINT_DIGITS);
    let sqrt3 = (BigUint::from(3u32) * &scale * &scale).sqrt();
    let two = &scale * 2u32;
    let up = &two + &sqrt3;
    let down = &two - &sqrt3;
    let power = |base: &BigUint| {
        let mut acc = scale.clone();
        for _ in 0..q {
            acc = &acc * base / &scale;
        }
        acc
    };
    let sum = power(&up) + power(&down);
    (sum + &scale / 2u32) / &scale
}

fn recurrence_oracle(_: &VerifyConfig) -> Result<Tally> {
    let mut t = Tally::default();
    for (n, a, _) in PellSequence::default().take(51) {
        let trace = &a * 2u32;
        let oracle = fixed_point_trace(n as u32);
        t.record(trace == oracle, || {
            format!("q={n}: recurrence {trace}, fixed point {oracle}")
        });
        if n % 2 == 1 {
            let p = pell_value(n)?;
            t.record(&p * 4u32 == trace, || format!("q={n}: pell_value {p}"));
        }
    }
    Ok(t)
}

fn pell_identity(c: &VerifyConfig) -> Result<Tally> {
    let mut t = Tally::default();
    for r in cd_search(100, c.workers)? {
        t.record(pell_identity_holds(&r), || format!("q={}", r.q));
    }
    Ok(t)
}

fn converse_witness(c: &VerifyConfig) -> Result<Tally> {
    let mut t = Tally::default();
    let witness = 76543u64;
    t.record(exceptional_fq(witness, 3)?.verdict, || {
        format!("{witness} is not 1-exceptional")
    });
    let target = BigUint::from(witness);
    let records = cd_search(100, c.workers)?;
    t.record(records.iter().all(|r| r.p_candidate != target), || {
        format!("{witness} appears among the Pell records")
    });
    Ok(t)
}

fn composite_indices(_: &VerifyConfig) -> Result<Tally> {
    let mut t = Tally::default();
    for q in [9u64, 15, 21, 25, 27, 33, 35] {
        let status = classify(&pell_value(q)?);
        t.record(status == PrimalityStatus::Composite, || {
            format!("q={q}: {status:?}")
        });
    }
    Ok(t)
}

fn pell_primes_exceptional(c: &VerifyConfig) -> Result<Tally> {
    let limit = BigUint::from(crate::pell::NONTRIVIAL_CHECK_LIMIT);
    let mut t = Tally::default();
    for r in cd_search(29, c.workers)?
        .into_iter()
        .filter(|r| r.p_candidate <= limit)
    {
        let ok = cd_implies_nontrivial(&r)?;
        t.record(ok, || format!("q={} p={}", r.q, r.p_candidate));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let names = invariant_names();
        for (i, a) in names.iter().enumerate() {
            assert!(names[i + 1..].iter().all(|b| b.1 != a.1), "{a:?}");
        }
    }

    #[test]
    fn filter_selects_module() {
        let config = VerifyConfig {
            only: Some("pell".into()),
            workers: 2,
            ..Default::default()
        };
        let report = run(&config).unwrap();
        assert!(report.passed());
        assert_eq!(report.outcomes.len(), 5);
        assert!(report.outcomes.iter().all(|o| o.module == "pell"));
    }

    #[test]
    fn unknown_filter_is_rejected() {
        let config = VerifyConfig {
            only: Some("nope".into()),
            ..Default::default()
        };
        assert!(run(&config).is_err());
    }

    #[test]
    fn flipped_normalization_breaks_route_agreement() {
        let config = VerifyConfig {
            only: Some("route_agreement".into()),
            workers: 4,
            normalization: Normalization::Flipped,
        };
        let report = run(&config).unwrap();
        assert!(!report.passed());
        let o = report.outcome("route_agreement").unwrap();
        assert!(
            o.counterexamples.iter().any(|s| s.starts_with("d=3 p=13:")),
            "{o:?}"
        );
    }

    #[test]
    fn fixed_point_matches_small_traces() {
        assert_eq!(fixed_point_trace(1), BigUint::from(4u32));
        assert_eq!(fixed_point_trace(3), BigUint::from(52u32));
    }
}
