mod common;

use common::*;
use proptest::prelude::*;
use tousched::bench::{
    format_front_csv, format_instance, format_sidecar, parse_front_csv, parse_instance,
    parse_sidecar, read_instance, write_instance,
};
use tousched::heuristics::sgs_es;
use tousched::Schedule;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instance_text_round_trip(inst in instance_strategy(8, 4, 20)) {
        let text = format_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(format_instance(&back), text);
    }

    #[test]
    fn sidecar_reproduces_rows(inst in instance_strategy(6, 3, 14), seed in any::<u64>()) {
        let front = sgs_es(&inst, seed);
        let rows = parse_front_csv(&format_front_csv(&front)).unwrap();
        let side = parse_sidecar(&format_sidecar(&front)).unwrap();
        prop_assert_eq!(rows.len(), side.len());
        for (row, entry) in rows.iter().zip(side) {
            let s = Schedule::new(&inst, entry.placements).unwrap();
            let obj = s.objectives(&inst);
            prop_assert_eq!(obj.makespan, entry.makespan);
            prop_assert_eq!(obj.tec, entry.tec);
            prop_assert_eq!(row[0], obj.makespan as f64);
            prop_assert_eq!(format!("{:.6}", row[1]), format!("{:.6}", obj.tec));
        }
    }
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.txt");
    write_instance(&three_jobs(), &path).unwrap();
    assert_eq!(read_instance(&path).unwrap(), three_jobs());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "3 1 10\n3 2 1\n1\n1 5 2 3 9 4 8 13 7 6\n"
    );
}
