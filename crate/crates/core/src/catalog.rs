//! The fixed family of groups used by sweeps, property tests and the
//! acceptance runner.

use crate::error::Result;
use crate::group::FiniteGroup;

fn product(parts: &[FiniteGroup]) -> Result<FiniteGroup> {
    let mut acc = parts[0].clone();
    for g in &parts[1..] {
        acc = FiniteGroup::direct_product(&acc, g)?;
    }
    Ok(acc)
}

fn cyclics(orders: &[usize]) -> Result<FiniteGroup> {
    let parts = orders.iter().map(|&n| FiniteGroup::cyclic(n)).collect::<Result<Vec<_>>>()?;
    product(&parts)
}

/// Every built-in group, in a fixed order.
pub fn builtin_groups() -> Result<Vec<FiniteGroup>> {
    let z = FiniteGroup::cyclic;
    let mut out = Vec::new();
    for n in 1..=24 {
        out.push(z(n)?);
    }
    for orders in [
        &[2, 2][..],
        &[2, 4],
        &[2, 2, 2],
        &[3, 3],
        &[2, 6],
        &[4, 4],
        &[2, 8],
        &[2, 2, 4],
        &[2, 2, 2, 2],
        &[3, 6],
        &[2, 10],
        &[2, 12],
        &[2, 2, 6],
        &[3, 9],
        &[3, 3, 3],
    ] {
        out.push(cyclics(orders)?);
    }
    for l in 1..=12 {
        out.push(FiniteGroup::dihedral(l)?);
    }
    out.push(FiniteGroup::dihedral(15)?);
    for l in 1..=5 {
        out.push(FiniteGroup::symmetric(l)?);
    }
    out.push(FiniteGroup::alternating(4)?);
    out.push(FiniteGroup::alternating(5)?);
    for m in 2..=6 {
        out.push(FiniteGroup::dicyclic(m)?);
    }
    for (p, q) in [(3, 7), (5, 11), (3, 13)] {
        out.push(FiniteGroup::pq(p, q)?);
    }
    let s3 = FiniteGroup::symmetric(3)?;
    let d4 = FiniteGroup::dihedral(4)?;
    let q8 = FiniteGroup::dicyclic(2)?;
    let a4 = FiniteGroup::alternating(4)?;
    out.push(product(&[s3.clone(), z(3)?])?);
    out.push(product(&[s3.clone(), z(4)?])?);
    out.push(product(&[d4.clone(), z(2)?])?);
    out.push(product(&[d4.clone(), z(3)?])?);
    out.push(product(&[q8.clone(), z(2)?])?);
    out.push(product(&[q8, z(3)?])?);
    out.push(product(&[a4.clone(), z(2)?])?);
    out.push(product(&[s3.clone(), s3])?);
    out.push(product(&[d4, z(2)?, z(2)?])?);
    out.push(product(&[a4, z(3)?])?);
    Ok(out)
}

/// Built-in groups of order at most `max_order`.
pub fn builtin_groups_up_to(max_order: usize) -> Result<Vec<FiniteGroup>> {
    Ok(builtin_groups()?.into_iter().filter(|g| g.order() <= max_order).collect())
}
