//! Runs the consistency suites over a small generated population.

use ordinal_goodstein::checks::{run_suite_on, CheckConfig, Suite};
use ordinal_goodstein::Result;

fn main() -> Result<()> {
    let cfg = CheckConfig::new(5, 2);
    let pop = cfg.population();
    println!("{} terms", pop.len());
    for suite in Suite::ALL {
        for r in run_suite_on(suite, &cfg, &pop)? {
            println!("{r}");
        }
    }
    Ok(())
}
