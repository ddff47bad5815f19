use super::instance::Instance;
use super::kernel::Kernel;
use super::statements::Statement;

/// Greedy shrinking: drop points, then generators, while the statement
/// still reports a violation. Returns a local minimum.
pub fn shrink(inst: &Instance, statement: &Statement, kernel: &Kernel) -> Instance {
    let fails = |i: &Instance| statement.evaluate(i, kernel).is_violation();
    debug_assert!(fails(inst));
    let mut best = inst.clone();
    loop {
        let mut improved = false;
        let n = best.points();
        for x in 0..n {
            if n == 1 {
                break;
            }
            let keep: Vec<usize> = (0..n).filter(|&y| y != x).collect();
            if let Ok(smaller) = best.restricted(&keep) {
                if fails(&smaller) {
                    best = smaller;
                    improved = true;
                    break;
                }
            }
        }
        if improved {
            continue;
        }
        for i in 0..best.sys.generators().len() {
            if let Some(smaller) = best.without_generator(i) {
                if fails(&smaller) {
                    best = smaller;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            return best;
        }
    }
}
