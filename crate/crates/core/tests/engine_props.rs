mod common;

use common::scenario;
use patrol_core::discretize::check_discretization;
use patrol_core::oracle::naive_idleness;
use patrol_core::*;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn generated_strategies_validate(seed in any::<u64>(), gamma in prop::sample::select(vec![0.0, 1e-4, 0.05, 1.0])) {
        let s = scenario(seed, gamma, 200..=2_000);
        let report = validate(&s.env, &s.strat);
        prop_assert!(report.is_valid(), "{}", report);
    }

    #[test]
    fn idleness_matches_oracle(seed in any::<u64>(), probes in prop::collection::vec(0.0..=1.0f64, 20)) {
        let s = scenario(seed, 0.05, 200..=2_000);
        let tl = Timeline::new(&s.env, &s.strat);
        for u in probes {
            let t = Tick((u * s.strat.horizon.0 as f64) as u64);
            prop_assert_eq!(tl.idleness(t).unwrap(), oracle_idleness(&s, t));
        }
    }

    #[test]
    fn idleness_is_piecewise_linear_between_events(seed in any::<u64>(), u in 0.0..1.0f64) {
        let s = scenario(seed, 0.05, 200..=2_000);
        let mut instants: Vec<Tick> = s.strat.events.iter().flat_map(|e| [e.arrival(), e.t]).collect();
        instants.push(s.strat.horizon);
        instants.sort_unstable();
        instants.dedup();
        let t1 = Tick((u * s.strat.horizon.0 as f64) as u64);
        // Next event strictly after t1 bounds the interval (t1, t2].
        let next = instants[instants.partition_point(|&t| t <= t1)..].first().copied();
        if let Some(next) = next {
            if next.0 > t1.0 + 1 {
                let t2 = Tick(next.0 - 1);
                let (a, b) = (idleness_at(&s.env, &s.strat, t1).unwrap(), idleness_at(&s.env, &s.strat, t2).unwrap());
                for (x, y) in a.0.iter().zip(&b.0) {
                    let delta = y.0 as i64 - x.0 as i64;
                    prop_assert!(delta == 0 || delta == (t2.0 - t1.0) as i64);
                }
            }
        }
    }

    #[test]
    fn cost_is_monotone_in_the_window(seed in any::<u64>(), cuts in prop::array::uniform4(0.0..=1.0f64)) {
        let s = scenario(seed, 0.05, 200..=2_000);
        let mut c: Vec<u64> = cuts.iter().map(|u| (u * s.strat.horizon.0 as f64) as u64).collect();
        c.sort_unstable();
        let tl = Timeline::new(&s.env, &s.strat);
        for spec in [CostSpec::GMI, CostSpec::GAI, CostSpec::WEIGHTED_MAX, CostSpec { norm: Norm::L2, use_phi: false, scale: Scale::Unit }] {
            let inner = tl.cost(spec, (Tick(c[1]), Tick(c[2]))).unwrap();
            let outer = tl.cost(spec, (Tick(c[0]), Tick(c[3]))).unwrap();
            prop_assert!(outer.value >= inner.value);
        }
    }

    #[test]
    fn discretization_invariants_hold(seed in any::<u64>()) {
        let s = scenario(seed, 0.05, 200..=2_000);
        let disc = discretize(&s.env, &s.strat, s.d).unwrap();
        prop_assert!(check_discretization(&s.env, &s.strat, &disc).unwrap().is_empty());
        let report = validate(&s.env, &disc.base);
        prop_assert!(report.is_valid(), "{}", report);
    }

    #[test]
    fn discretization_is_idempotent(seed in any::<u64>()) {
        let s = scenario(seed, 0.05, 200..=2_000);
        let once = discretize(&s.env, &s.strat, s.d).unwrap();
        let twice = discretize(&s.env, &once.base, s.d).unwrap();
        prop_assert_eq!(&twice.base.events, &once.base.events);
        prop_assert!(twice.audit.iter().all(|a| a.d == Tick::ZERO));
    }

    #[test]
    fn discrete_positions_lie_on_the_quantum_grid(seed in any::<u64>()) {
        let s = scenario(seed, 0.05, 200..=2_000);
        let disc = discretize(&s.env, &s.strat, s.d).unwrap();
        let until = disc.base.determined_until().unwrap();
        let tl = Timeline::new(&s.env, &disc.base);
        for e in disc.base.events.iter().filter(|e| e.t <= until) {
            for p in tl.positions(e.t).unwrap() {
                match p {
                    AgentPosition::AtNode(_) => {}
                    AgentPosition::OnEdge { elapsed, .. } => prop_assert!(elapsed.is_multiple_of(s.d)),
                    AgentPosition::Departed { .. } => prop_assert!(false, "undetermined position at {}", e.t),
                }
            }
        }
    }
}

fn oracle_idleness(s: &common::Scenario, t: Tick) -> IdlenessVector {
    naive_idleness(&s.env, &s.strat, t)
}

#[test]
fn oracle_agrees_on_ten_thousand_probes() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
    let mut probes = 0;
    for seed in 0..100u64 {
        let s = scenario(seed, 1e-4, 1_000..=5_000);
        let tl = Timeline::new(&s.env, &s.strat);
        for _ in 0..100 {
            let t = Tick(rng.random_range(0..=s.strat.horizon.0));
            assert_eq!(tl.idleness(t).unwrap(), naive_idleness(&s.env, &s.strat, t), "seed {seed} t {t}");
            probes += 1;
        }
    }
    assert_eq!(probes, 10_000);
}

#[test]
fn zero_gamma_consumes_no_randomness() {
    let s = scenario(11, 0.0, 500..=500);
    let starts: Vec<_> = s.strat.agents.iter().map(|a| match a.start {
        AgentPosition::AtNode(v) => (a.name.clone(), v),
        _ => unreachable!(),
    }).collect();
    let run = |seed| greedy_random(&s.env, &GreedyRandomConfig { gamma: 0.0, lambda: 1.0, seed, horizon: Tick(500), starts: starts.clone() }).unwrap();
    assert_eq!(run(1), run(2));
}
