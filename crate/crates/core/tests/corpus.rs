use std::path::PathBuf;

use coupled_are::format::{parse_problem, parse_solution, serialize_problem, serialize_solution};
use coupled_are::problem::{builtin_example, EXAMPLE_IDS};
use coupled_are::verify::verify_solution;

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems")
}

#[test]
fn shipped_problems_roundtrip_bytewise() {
    for id in EXAMPLE_IDS {
        let text = std::fs::read_to_string(corpus().join(format!("example{id}.json"))).unwrap();
        let spec = parse_problem(&text).unwrap();
        assert_eq!(serialize_problem(&spec), text, "example{id}.json");
        assert_eq!(spec, builtin_example(id).unwrap().0);
    }
}

#[test]
fn shipped_solutions_roundtrip_and_verify() {
    for id in EXAMPLE_IDS {
        let text =
            std::fs::read_to_string(corpus().join(format!("example{id}_solution.json"))).unwrap();
        let sol = parse_solution(&text).unwrap();
        assert_eq!(serialize_solution(&sol), text);
        let (spec, expected) = builtin_example(id).unwrap();
        assert_eq!(sol.values, expected);
        let v = verify_solution(&spec, &sol.values, sol.gains.as_ref(), 1e-8).unwrap();
        assert_eq!(v.pass, id != 5, "example {id}: {:?}", v.report);
        if id == 5 {
            // printed 4-decimal data leaves residuals of about 8e-5
            assert!(
                verify_solution(&spec, &sol.values, sol.gains.as_ref(), 5e-3)
                    .unwrap()
                    .pass
            );
        }
    }
}
