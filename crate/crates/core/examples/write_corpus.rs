//! Regenerates the problem files under `problems/` from the built-in examples.

use std::path::PathBuf;

use coupled_are::format::{serialize_problem, serialize_solution, SolutionFile};
use coupled_are::problem::{example, EXAMPLE_IDS};
use coupled_are::verify::verify_solution;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "problems".into()));
    std::fs::create_dir_all(&dir)?;
    for id in EXAMPLE_IDS {
        let ex = example(id)?;
        std::fs::write(
            dir.join(format!("example{id}.json")),
            serialize_problem(&ex.spec),
        )?;
        let gains = verify_solution(&ex.spec, &ex.expected, None, 0.0)?.gains;
        let sol = SolutionFile {
            values: ex.expected,
            gains: Some(gains),
            iterations: None,
            residuals: None,
            status: None,
        };
        std::fs::write(
            dir.join(format!("example{id}_solution.json")),
            serialize_solution(&sol),
        )?;
    }
    Ok(())
}
