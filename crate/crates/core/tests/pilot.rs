// Pilot run that fixed the random-permutation thresholds; see data/pilot.md.
// Run with: cargo test -p permpat --test pilot -- --ignored --nocapture

use permpat::entangling::random_permutation_stats;

pub const PILOT_SEED: u64 = 1;

#[test]
#[ignore]
fn pilot_random_permutation_fractions() {
    let s = random_permutation_stats(12, 2000, PILOT_SEED).unwrap();
    println!("k=12 samples=2000 seed={PILOT_SEED}");
    println!("frac d >= k-3: {:.4}", s.frac_at_least_k_minus_3);
    println!("frac d >= k-2: {:.4}", s.frac_at_least_k_minus_2);
    let mut hist = [0usize; 13];
    for &d in &s.d_values {
        hist[d] += 1;
    }
    println!("histogram of d: {hist:?}");
}
