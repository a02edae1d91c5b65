//! Strength and Iwasawa structures of the order-256 metacyclic group, and
//! conditions (c)/(d) for a few small groups.

use traceforms::corpus;
use traceforms::group::build_group;
use traceforms::iwasawa::{iwasawa_structures, strength, thm2_classify};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = build_group(&corpus::example_44())?;
    println!("order {}, strength {}", g.order(), strength(&g)?);
    for st in iwasawa_structures(&g, 3)?.iter().take(5) {
        println!("  structure {}", st.describe(&g));
    }
    for name in ["D8", "Q8", "M16", "M32", "SD16"] {
        let g = corpus::find(name).expect("corpus entry").build()?;
        for m in 2..=3 {
            let rep = thm2_classify(&g, m)?;
            println!("{name} m={m}: (c) {} (d) {}", rep.cond_c, rep.cond_d);
        }
    }
    Ok(())
}
