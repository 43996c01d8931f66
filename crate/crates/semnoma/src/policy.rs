//! Per-block action optimization for the secondary user.
//!
//! The sampled problem: over a list of fading-block outcomes, choose one
//! action per block (stay silent, transmit semantically, or transmit bits)
//! to maximize the secondary user's average semantic-axis rate subject to a
//! minimum average bit rate for the primary user.
//!
//! [`solve_scheme`] uses a Lagrangian threshold policy: per block take the
//! action maximizing `secondary_rate - lambda * (rate_p_off - rate_p)`,
//! with `lambda` found by bisection so that the sample-average primary rate
//! meets the constraint with complementary slackness. The problem is
//! separable across blocks, so the duality gap is bounded by a single
//! block's contribution; [`enumerate_optimal`] is the exact exhaustive
//! oracle used to verify that bound on small instances.

use crate::noma::BlockOutcome;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolicyError {
    #[error("empty outcome sample")]
    EmptySample,
    #[error("constraint unreachable: even the all-silent policy misses the primary rate floor")]
    Infeasible,
    #[error("instance too large for exhaustive enumeration (max {max} blocks, got {got})")]
    TooLarge { max: usize, got: usize },
}

/// Secondary access scheme, fixing which actions a block may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Pick per block among silence, semantic mode, and bit mode.
    Opportunistic,
    /// Silence or semantic mode only.
    SemOnly,
    /// Silence or bit mode only.
    BitOnly,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [
        SchemeKind::Opportunistic,
        SchemeKind::SemOnly,
        SchemeKind::BitOnly,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::Opportunistic => "opportunistic",
            SchemeKind::SemOnly => "sem-only",
            SchemeKind::BitOnly => "bit-only",
        }
    }
}

impl std::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "opportunistic" => Ok(SchemeKind::Opportunistic),
            "sem-only" => Ok(SchemeKind::SemOnly),
            "bit-only" => Ok(SchemeKind::BitOnly),
            other => Err(format!(
                "unknown scheme '{other}' (expected opportunistic, sem-only, or bit-only)"
            )),
        }
    }
}

/// Secondary action in one block. The declaration order is the
/// deterministic tie-break order (earlier wins).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Action {
    Off,
    Bit,
    Sem,
}

/// Solution of the sampled constrained problem for one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeResult {
    /// Average realized secondary rate, suts/s/Hz.
    pub ergodic_secondary: f64,
    /// Average realized primary rate, bits/s/Hz.
    pub ergodic_primary: f64,
    /// Dual price in suts per bit (0 when the constraint is slack or the
    /// result comes from the exhaustive oracle).
    pub lambda: f64,
    /// Chosen action per block, in input order.
    pub actions: Vec<Action>,
    pub feasible: bool,
}

/// One available action with its realized secondary/primary rates.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    action: Action,
    s: f64,
    p: f64,
}

/// Per-block action menu. Candidates are stored in tie-break order.
#[derive(Debug, Clone, Copy)]
struct Arms {
    cands: [Candidate; 3],
    len: usize,
    p_off: f64,
}

impl Arms {
    fn candidates(&self) -> &[Candidate] {
        &self.cands[..self.len]
    }
}

/// Build the action menu for one block under a scheme. A semantic
/// transmission below the similarity threshold is an unavailable action,
/// not a zero-rate one.
fn arms(outcome: &BlockOutcome, scheme: SchemeKind) -> Arms {
    let mut cands = [Candidate {
        action: Action::Off,
        s: 0.0,
        p: outcome.rate_p_off,
    }; 3];
    let mut len = 1;
    if scheme != SchemeKind::SemOnly {
        cands[len] = Candidate {
            action: Action::Bit,
            s: outcome.bitum_rate,
            p: outcome.rate_p_on,
        };
        len += 1;
    }
    if scheme != SchemeKind::BitOnly && outcome.sem_feasible {
        cands[len] = Candidate {
            action: Action::Sem,
            s: outcome.sem_rate,
            p: outcome.rate_p_on,
        };
        len += 1;
    }
    Arms {
        cands,
        len,
        p_off: outcome.rate_p_off,
    }
}

/// Per-block argmax of `s - lambda * (p_off - p)`; ties go to the higher
/// primary rate, then to the earlier action in declaration order.
fn pick(arms: &Arms, lambda: f64) -> Candidate {
    let mut best = arms.cands[0];
    let mut best_score = 0.0; // Off always scores zero
    for c in &arms.candidates()[1..] {
        let score = c.s - lambda * (arms.p_off - c.p);
        if score > best_score || (score == best_score && c.p > best.p) {
            best = *c;
            best_score = score;
        }
    }
    best
}

struct Assignment {
    actions: Vec<Action>,
    mean_s: f64,
    mean_p: f64,
}

fn threshold_assignment(arms: &[Arms], lambda: f64) -> Assignment {
    let n = arms.len() as f64;
    let mut actions = Vec::with_capacity(arms.len());
    let (mut sum_s, mut sum_p) = (0.0, 0.0);
    for a in arms {
        let c = pick(a, lambda);
        actions.push(c.action);
        sum_s += c.s;
        sum_p += c.p;
    }
    Assignment {
        actions,
        mean_s: sum_s / n,
        mean_p: sum_p / n,
    }
}

const BISECT_MAX_ITER: usize = 200;
const CONSTRAINT_TOL: f64 = 1e-10;

/// Lagrangian threshold solve for one scheme.
fn lagrangian_solve(
    outcomes: &[BlockOutcome],
    scheme: SchemeKind,
    r_min: f64,
) -> Result<SchemeResult, PolicyError> {
    if outcomes.is_empty() {
        return Err(PolicyError::EmptySample);
    }
    let arms: Vec<Arms> = outcomes.iter().map(|o| self::arms(o, scheme)).collect();
    let n = arms.len() as f64;
    let mean_off = arms.iter().map(|a| a.p_off).sum::<f64>() / n;
    if mean_off < r_min {
        return Err(PolicyError::Infeasible);
    }

    // Slack constraint: the unconstrained argmax already satisfies it.
    let unconstrained = threshold_assignment(&arms, 0.0);
    if unconstrained.mean_p >= r_min {
        return Ok(result_from(unconstrained, 0.0));
    }

    // Above lambda_max every block with a real interference cost prefers
    // silence, so the assignment is feasible there.
    let mut max_s = 0.0f64;
    let mut min_loss = f64::INFINITY;
    for a in &arms {
        for c in a.candidates() {
            max_s = max_s.max(c.s);
            let loss = a.p_off - c.p;
            if loss > 0.0 {
                min_loss = min_loss.min(loss);
            }
        }
    }
    let lambda_max = if min_loss.is_finite() {
        max_s / min_loss + 1.0
    } else {
        1.0
    };

    let mut lo = 0.0f64;
    let mut hi = lambda_max;
    let mut at_hi = threshold_assignment(&arms, hi);
    debug_assert!(at_hi.mean_p >= r_min);
    for _ in 0..BISECT_MAX_ITER {
        if at_hi.mean_p - r_min <= CONSTRAINT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let at_mid = threshold_assignment(&arms, mid);
        if at_mid.mean_p >= r_min {
            hi = mid;
            at_hi = at_mid;
        } else {
            lo = mid;
        }
    }

    let repaired = repair(&arms, at_hi, hi, r_min);
    Ok(result_from(repaired, hi))
}

/// Flip the blocks nearest lambda-indifference to silence until the
/// assignment is feasible. The bisection terminates on the feasible side,
/// so normally there is nothing to flip.
fn repair(arms: &[Arms], mut assignment: Assignment, lambda: f64, r_min: f64) -> Assignment {
    if assignment.mean_p >= r_min {
        return assignment;
    }
    let n = arms.len() as f64;
    let mut margins: Vec<(f64, usize)> = assignment
        .actions
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != Action::Off)
        .map(|(i, &action)| {
            let c = arms[i]
                .candidates()
                .iter()
                .find(|c| c.action == action)
                .copied()
                .expect("chosen action present in menu");
            (c.s - lambda * (arms[i].p_off - c.p), i)
        })
        .collect();
    margins.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (_, i) in margins {
        if assignment.mean_p >= r_min {
            break;
        }
        let action = assignment.actions[i];
        let c = arms[i]
            .candidates()
            .iter()
            .find(|c| c.action == action)
            .copied()
            .expect("chosen action present in menu");
        assignment.actions[i] = Action::Off;
        assignment.mean_s -= c.s / n;
        assignment.mean_p += (arms[i].p_off - c.p) / n;
    }
    assignment
}

fn result_from(assignment: Assignment, lambda: f64) -> SchemeResult {
    SchemeResult {
        ergodic_secondary: assignment.mean_s,
        ergodic_primary: assignment.mean_p,
        lambda,
        actions: assignment.actions,
        feasible: true,
    }
}

/// Solve the sampled constrained problem for one scheme.
///
/// For the opportunistic scheme the solver also runs the two restricted
/// action sets and keeps the best feasible primal: every restricted-scheme
/// solution is a valid opportunistic action vector, so the opportunistic
/// result dominates the fixed schemes on the same sample by construction.
pub fn solve_scheme(
    outcomes: &[BlockOutcome],
    scheme: SchemeKind,
    r_min: f64,
) -> Result<SchemeResult, PolicyError> {
    match scheme {
        SchemeKind::Opportunistic => {
            let mut best = lagrangian_solve(outcomes, SchemeKind::Opportunistic, r_min)?;
            for restricted in [SchemeKind::SemOnly, SchemeKind::BitOnly] {
                let alt = lagrangian_solve(outcomes, restricted, r_min)?;
                if alt.ergodic_secondary > best.ergodic_secondary {
                    best = alt;
                }
            }
            Ok(best)
        }
        fixed => lagrangian_solve(outcomes, fixed, r_min),
    }
}

pub const ENUMERATION_MAX_BLOCKS: usize = 14;

/// Exact optimum of the sampled problem by exhaustive search over action
/// assignments. Test oracle; exponential in the number of blocks.
///
/// Assignments are scanned in lexicographic order (block 0 most
/// significant, actions ordered silence < bit < semantic), and only a
/// strictly better objective replaces the incumbent, so ties resolve to
/// the lexicographically smallest action vector.
pub fn enumerate_optimal(
    outcomes: &[BlockOutcome],
    scheme: SchemeKind,
    r_min: f64,
) -> Result<SchemeResult, PolicyError> {
    if outcomes.is_empty() {
        return Err(PolicyError::EmptySample);
    }
    if outcomes.len() > ENUMERATION_MAX_BLOCKS {
        return Err(PolicyError::TooLarge {
            max: ENUMERATION_MAX_BLOCKS,
            got: outcomes.len(),
        });
    }
    let arms: Vec<Arms> = outcomes.iter().map(|o| self::arms(o, scheme)).collect();
    let n = arms.len() as f64;
    let mean_off = arms.iter().map(|a| a.p_off).sum::<f64>() / n;
    if mean_off < r_min {
        return Err(PolicyError::Infeasible);
    }

    let mut indices = vec![0usize; arms.len()];
    let mut best: Option<(f64, f64, Vec<usize>)> = None;
    loop {
        let (mut sum_s, mut sum_p) = (0.0, 0.0);
        for (a, &i) in arms.iter().zip(&indices) {
            let c = a.cands[i];
            sum_s += c.s;
            sum_p += c.p;
        }
        let (mean_s, mean_p) = (sum_s / n, sum_p / n);
        if mean_p >= r_min && best.as_ref().is_none_or(|(bs, _, _)| mean_s > *bs) {
            best = Some((mean_s, mean_p, indices.clone()));
        }

        // odometer increment, last block least significant
        let mut pos = arms.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < arms[pos].len {
                break;
            }
            indices[pos] = 0;
        }
        if pos == 0 && indices[0] == 0 {
            break;
        }
    }

    let (mean_s, mean_p, winning) = best.expect("all-silent assignment is always feasible here");
    let actions = winning
        .iter()
        .zip(&arms)
        .map(|(&i, a)| a.cands[i].action)
        .collect();
    Ok(SchemeResult {
        ergodic_secondary: mean_s,
        ergodic_primary: mean_p,
        lambda: 0.0,
        actions,
        feasible: true,
    })
}
