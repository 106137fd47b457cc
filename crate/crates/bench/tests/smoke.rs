use std::time::{Duration, Instant};

use fairgame_bench::workload;
use fairgame_core::{solve_energy, solve_mp_threshold, Rational};

#[test]
fn large_regular_instances_finish_quickly() {
    let start = Instant::now();
    for seed in 0..3 {
        let a = workload(200, 50, None, seed);
        assert_eq!(a.node_count(), 200);
        let energy = solve_energy(&a).regions;
        let mp = solve_mp_threshold(&a, Rational::ZERO).unwrap().regions;
        assert!(energy.is_partition(200) && mp.is_partition(200));
        assert_eq!(energy.win1, mp.win1);
    }
    let elapsed = start.elapsed();
    println!("three n=200, W=50 instances solved in {elapsed:.2?}");
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
}
