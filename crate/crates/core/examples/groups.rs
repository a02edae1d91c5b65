//! Build a few groups and print their basic structure.

use traceforms::corpus;
use traceforms::group::{all_subgroups, build_group, frattini, frattini_rank, is_lattice_modular, sylow2, PresentationSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let specs = [
        ("D8", PresentationSpec::Dihedral { order: 8 }),
        ("Q8", PresentationSpec::Quaternion { order: 8 }),
        ("M16", PresentationSpec::ModularM2n { n: 4 }),
        ("S4", corpus::s4()),
    ];
    for (name, spec) in specs {
        let g = build_group(&spec)?;
        let (s, _) = g.subgroup_table(&sylow2(&g));
        println!(
            "{name}: order {}, exponent {}, {} subgroups, Sylow 2-subgroup of order {}",
            g.order(),
            g.exponent(),
            all_subgroups(&g)?.len(),
            s.order()
        );
        println!(
            "  Frattini subgroup of S has order {}, rank {}; lattice modular: {}",
            frattini(&s)?.order(),
            frattini_rank(&s)?,
            is_lattice_modular(&s)?.modular
        );
    }
    Ok(())
}
