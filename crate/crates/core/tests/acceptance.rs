//! One line per acceptance criterion; fails if any criterion fails or runs
//! past its time limit.

use roundgroups::acceptance::{run_all, AcceptOptions, Suite};

fn main() {
    let options = AcceptOptions { suite: Suite::Full, seed: 42, inject_fault: false };
    let outcomes = run_all(&options);
    let mut failures = 0;
    for o in &outcomes {
        let on_time = o.within_time_limit();
        let ok = o.passed && on_time;
        failures += usize::from(!ok);
        println!(
            "[{}] criterion {:>2}: {} ({:.2}s / limit {}s){} - {}",
            if ok { "PASS" } else { "FAIL" },
            o.id,
            o.title,
            o.elapsed.as_secs_f64(),
            o.time_limit_secs,
            if on_time { "" } else { " TIME LIMIT EXCEEDED" },
            o.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", outcomes.len() - failures, outcomes.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
