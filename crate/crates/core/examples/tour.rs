use henson_core::builders::{build_sk, build_tk, CodingSelector, NodeEnumeration};
use henson_core::precliques::{
    freeness, preclique_schedule, witnessing_report, ScheduleOptions, WitnessMode,
};

fn main() {
    let s3 = build_sk(3, 10, &NodeEnumeration::Default, &CodingSelector::Default).unwrap();
    let widths: Vec<usize> = (0..11).map(|l| s3.nodes().level_set(l).len()).collect();
    println!("s3 widths: {widths:?}");
    let t3 = build_tk(3, 6, &NodeEnumeration::Default, &CodingSelector::Default).unwrap();
    let lens: Vec<usize> = t3.coding_entries(false).map(|(_, c)| c.len()).collect();
    println!("t3 coding lengths: {lens:?}");
    let r10 = t3.first_levels(10);
    let rep = witnessing_report(&t3, &r10, WitnessMode::StrongWp).unwrap();
    println!("strong witnessing on 10-level prefix: {}", rep.holds);
    let x = t3.nodes().cross_section(5);
    println!("coding-length level set free: {}", freeness(&t3, &x).unwrap());
    let sched = preclique_schedule(
        &t3,
        &t3.nodes().cross_section(6),
        &ScheduleOptions::default(),
    )
    .unwrap();
    println!(
        "schedule of the 6-level cross-section: {} events, levels {:?}",
        sched.len(),
        sched.iter().map(|e| e.level).collect::<Vec<_>>()
    );
}
