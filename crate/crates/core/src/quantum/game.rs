use rand::Rng;
use serde::Serialize;

use super::instrument::{alice_instrument, bob_instrument};
use super::process::ProcessMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RoundInputs {
    pub a: u8,
    pub b: u8,
    pub b_prime: u8,
}

/// `P(x, y | a, b, b')`, indexed `[x][y]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RoundDistribution {
    pub inputs: RoundInputs,
    pub probs: [[f64; 2]; 2],
}

impl RoundDistribution {
    pub fn total(&self) -> f64 {
        self.probs.iter().flatten().sum()
    }

    /// Marginal of Alice's outcome.
    pub fn alice_marginal(&self) -> [f64; 2] {
        [self.probs[0][0] + self.probs[0][1], self.probs[1][0] + self.probs[1][1]]
    }

    pub fn bob_marginal(&self) -> [f64; 2] {
        [self.probs[0][0] + self.probs[1][0], self.probs[0][1] + self.probs[1][1]]
    }

    /// Probability that the two parties end the round with equal key bits.
    pub fn key_agreement(&self) -> f64 {
        let mut p = 0.0;
        for x in 0..2u8 {
            for y in 0..2u8 {
                let outcome = RoundOutcome::new(self.inputs, x, y);
                if outcome.key_alice == outcome.key_bob {
                    p += self.probs[x as usize][y as usize];
                }
            }
        }
        p
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (u8, u8) {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for x in 0..2u8 {
            for y in 0..2u8 {
                acc += self.probs[x as usize][y as usize];
                if u < acc {
                    return (x, y);
                }
            }
        }
        (1, 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RoundOutcome {
    pub a: u8,
    pub b: u8,
    pub b_prime: u8,
    pub x: u8,
    pub y: u8,
    /// Bob's public announcement `(1-b')y ⊕ b`.
    pub z: u8,
    pub key_alice: u8,
    pub key_bob: u8,
}

impl RoundOutcome {
    pub fn new(inputs: RoundInputs, x: u8, y: u8) -> Self {
        let RoundInputs { a, b, b_prime } = inputs;
        let (key_alice, key_bob) = if b_prime == 1 { (a, y) } else { (x, b) };
        Self {
            a,
            b,
            b_prime,
            x,
            y,
            z: ((1 - b_prime) * y) ^ b,
            key_alice,
            key_bob,
        }
    }
}

/// `tr[W (A_{a,x} ⊗ B_{b,b',y})]` for all outcomes.
pub fn round_distribution(w: &ProcessMatrix, a: u8, b: u8, b_prime: u8) -> RoundDistribution {
    let alice = alice_instrument(a);
    let bob = bob_instrument(b, b_prime);
    let mut probs = [[0.0; 2]; 2];
    for ea in &alice {
        for eb in &bob {
            let joint = ea.operator.tensor(&eb.operator).expect("disjoint parties");
            let p = w.operator().checked_mul(&joint).expect("same bipartite space").trace();
            probs[ea.outcome as usize][eb.outcome as usize] = p.re;
        }
    }
    RoundDistribution {
        inputs: RoundInputs { a, b, b_prime },
        probs,
    }
}

/// `½ P(x=b | b'=0) + ½ P(y=a | b'=1)` with uniformly random `a`, `b`.
pub fn game_success_probability(w: &ProcessMatrix) -> f64 {
    let mut total = 0.0;
    for a in 0..2u8 {
        for b in 0..2u8 {
            let send = round_distribution(w, a, b, 0);
            let read = round_distribution(w, a, b, 1);
            let x_hits_b = send.alice_marginal()[b as usize];
            let y_hits_a = read.bob_marginal()[a as usize];
            total += 0.5 * x_hits_b + 0.5 * y_hits_a;
        }
    }
    total / 4.0
}

pub fn sample_round<R: Rng + ?Sized>(w: &ProcessMatrix, a: u8, b: u8, b_prime: u8, rng: &mut R) -> RoundOutcome {
    let dist = round_distribution(w, a, b, b_prime);
    let (x, y) = dist.sample(rng);
    RoundOutcome::new(dist.inputs, x, y)
}

/// All eight round distributions of a process, precomputed for repeated sampling.
#[derive(Clone, Debug)]
pub struct RoundSampler {
    table: [RoundDistribution; 8],
}

impl RoundSampler {
    pub fn new(w: &ProcessMatrix) -> Self {
        let table = std::array::from_fn(|i| {
            let (a, b, bp) = ((i >> 2) as u8, ((i >> 1) & 1) as u8, (i & 1) as u8);
            round_distribution(w, a, b, bp)
        });
        Self { table }
    }

    pub fn distribution(&self, a: u8, b: u8, b_prime: u8) -> &RoundDistribution {
        &self.table[((a as usize) << 2) | ((b as usize) << 1) | b_prime as usize]
    }

    pub fn sample<R: Rng + ?Sized>(&self, a: u8, b: u8, b_prime: u8, rng: &mut R) -> RoundOutcome {
        let dist = self.distribution(a, b, b_prime);
        let (x, y) = dist.sample(rng);
        RoundOutcome::new(dist.inputs, x, y)
    }

    /// Key agreement averaged over uniformly random inputs.
    pub fn mean_key_agreement(&self) -> f64 {
        self.table.iter().map(RoundDistribution::key_agreement).sum::<f64>() / 8.0
    }
}
