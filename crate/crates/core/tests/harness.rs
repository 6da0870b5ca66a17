use cotrace::harness::{run_sweep, run_sweep_sequential, write_summary_csv, SummaryMetric};
use cotrace::{aggregate, run_scenario, MaskPolicy, SimConfig, SweepSpec};

fn base() -> SimConfig {
    SimConfig {
        area_width: 400.0,
        area_height: 400.0,
        initial_confirmed: 10,
        initial_carriers: 5,
        horizon: 120,
        ..SimConfig::default()
    }
}

fn spec() -> SweepSpec {
    SweepSpec::population(
        vec![150, 300],
        vec![3, 1, 2],
        vec![MaskPolicy::NoneMasked, MaskPolicy::AllMasked],
    )
}

#[test]
fn parallel_equals_sequential() {
    let seq = run_sweep_sequential(&base(), &spec()).unwrap();
    let par = run_sweep(&base(), &spec(), 4).unwrap();
    let one = run_sweep(&base(), &spec(), 1).unwrap();
    assert_eq!(seq.len(), 12);
    assert_eq!(seq, par);
    assert_eq!(seq, one);
    let keys: Vec<_> = seq.iter().map(|r| (r.population, r.scenario, r.seed)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn replication_matches_a_standalone_run() {
    let results = run_sweep(&base(), &spec(), 2).unwrap();
    let r = results
        .iter()
        .find(|r| r.population == 300 && r.scenario == MaskPolicy::AllMasked && r.seed == 2)
        .unwrap();
    let cfg = SimConfig {
        population: 300,
        mask_policy: MaskPolicy::AllMasked,
        ..base()
    };
    assert_eq!(run_scenario(&cfg, 2).unwrap().final_totals(), r.totals);
}

#[test]
fn summary_is_byte_stable() {
    let render = || {
        let rows = aggregate(&run_sweep(&base(), &spec(), 3).unwrap());
        let mut buf = Vec::new();
        write_summary_csv(&rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    };
    let a = render();
    assert_eq!(a, render());
    assert_eq!(a.lines().count(), 1 + 2 * 2 * SummaryMetric::ALL.len());
    assert!(a.starts_with("population,scenario,metric,mean,stddev,min,max\n150,all-masked,exposed_to_confirmed,"));
}

#[test]
fn invalid_points_fail_before_running() {
    let bad = SweepSpec::population(vec![10], vec![1], vec![MaskPolicy::NoneMasked]);
    // 15 initial cases cannot fit in a population of 10
    assert!(run_sweep(&base(), &bad, 1).is_err());
}
