use std::fmt::Write as _;
use std::sync::Arc;

use super::gate::{Control, Gate};
use crate::error::{invalid_arg, Error, Result};

/// Widest circuit the simulators accept; basis states are packed in a `u64`.
pub const MAX_WIDTH: usize = 64;

/// Classical data addressed by a [`Gate::Load`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LookupTable {
    address_bits: usize,
    data_bits: usize,
    values: Vec<u64>,
}

impl LookupTable {
    pub fn new(address_bits: usize, data_bits: usize, values: Vec<u64>) -> Result<Self> {
        if address_bits > 32 || data_bits == 0 || data_bits > 64 {
            return invalid_arg(format!(
                "lookup table of {address_bits} address bits and {data_bits} data bits"
            ));
        }
        if values.len() != 1 << address_bits {
            return invalid_arg(format!(
                "lookup table needs {} entries, got {}",
                1u64 << address_bits,
                values.len()
            ));
        }
        if data_bits < 64 {
            if let Some(v) = values.iter().find(|&&v| v >> data_bits != 0) {
                return invalid_arg(format!("table value {v} exceeds {data_bits} bits"));
            }
        }
        Ok(LookupTable { address_bits, data_bits, values })
    }

    pub fn address_bits(&self) -> usize {
        self.address_bits
    }

    pub fn data_bits(&self) -> usize {
        self.data_bits
    }

    #[inline]
    pub fn get(&self, address: u64) -> u64 {
        self.values[address as usize]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

/// A gate together with the block it was emitted by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instruction {
    pub gate: Gate,
    pub block: Option<Arc<str>>,
}

/// Append-only construction of a [`Circuit`].
///
/// Gates pushed inside [`CircuitBuilder::scoped`] carry the label of the
/// outermost open scope, so a comparator emitted inside an absolute-value
/// subtractor is attributed to the subtractor.
#[derive(Debug)]
pub struct CircuitBuilder {
    width: usize,
    ops: Vec<Instruction>,
    scopes: Vec<Arc<str>>,
    table_slots: usize,
}

impl CircuitBuilder {
    pub fn new(width: usize) -> Result<Self> {
        if width == 0 {
            return invalid_arg("circuit width must be at least 1");
        }
        if width > MAX_WIDTH {
            return Err(Error::Unsupported(format!(
                "circuit width {width} exceeds {MAX_WIDTH} wires"
            )));
        }
        Ok(CircuitBuilder { width, ops: Vec::new(), scopes: Vec::new(), table_slots: 0 })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn append(&mut self, gate: Gate) -> Result<&mut Self> {
        let block = self.scopes.first().cloned();
        self.push(gate, block)
    }

    /// Appends with an explicit label, overriding any open scope.
    pub fn append_labeled(&mut self, gate: Gate, label: &str) -> Result<&mut Self> {
        self.push(gate, Some(Arc::from(label)))
    }

    fn push(&mut self, gate: Gate, block: Option<Arc<str>>) -> Result<&mut Self> {
        gate.validate(self.width)?;
        if let Gate::Load { slot, .. } = gate {
            if slot >= self.table_slots {
                return Err(Error::InvalidGate(format!("LOAD uses undeclared table slot {slot}")));
            }
        }
        self.ops.push(Instruction { gate, block });
        Ok(self)
    }

    /// Runs `f` with `label` attached to every gate it appends.
    pub fn scoped<T>(
        &mut self,
        label: &str,
        f: impl FnOnce(&mut CircuitBuilder) -> Result<T>,
    ) -> Result<T> {
        self.scopes.push(Arc::from(label));
        let out = f(self);
        self.scopes.pop();
        out
    }

    /// Reserves a lookup-table slot for [`Gate::Load`] gates.
    pub fn declare_table(&mut self) -> usize {
        self.table_slots += 1;
        self.table_slots - 1
    }

    /// Appends every instruction of `other`, keeping its labels unless a
    /// scope is open.
    pub fn extend(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.width > self.width {
            return invalid_arg(format!(
                "cannot append a {}-wire circuit to a {}-wire one",
                other.width, self.width
            ));
        }
        if other.tables.iter().any(Option::is_some) {
            return invalid_arg("cannot splice a circuit with bound tables");
        }
        while self.table_slots < other.tables.len() {
            self.declare_table();
        }
        for ins in &other.ops {
            let block = self.scopes.first().cloned().or_else(|| ins.block.clone());
            self.push(ins.gate.clone(), block)?;
        }
        Ok(self)
    }

    pub fn build(self) -> Circuit {
        Circuit { width: self.width, ops: self.ops, tables: vec![None; self.table_slots] }
    }
}

/// An immutable, labelled gate sequence over `width` wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    width: usize,
    ops: Vec<Instruction>,
    tables: Vec<Option<Arc<LookupTable>>>,
}

impl Circuit {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.ops
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> + '_ {
        self.ops.iter().map(|i| &i.gate)
    }

    pub fn is_reset_free(&self) -> bool {
        self.gates().all(|g| !g.is_reset())
    }

    pub fn table_slots(&self) -> usize {
        self.tables.len()
    }

    /// Returns a copy with `table` bound to `slot`. Every load on that slot
    /// must fit the table's address and data widths.
    pub fn bind_table(&self, slot: usize, table: LookupTable) -> Result<Circuit> {
        if slot >= self.tables.len() {
            return invalid_arg(format!("circuit has no table slot {slot}"));
        }
        for g in self.gates() {
            if let Gate::Load { address, targets, slot: s } = g {
                if *s == slot
                    && (address.len() != table.address_bits || targets.len() != table.data_bits)
                {
                    return invalid_arg(format!(
                        "table of {}x{} bits does not fit a load with {} address and {} data wires",
                        table.address_bits,
                        table.data_bits,
                        address.len(),
                        targets.len()
                    ));
                }
            }
        }
        let mut out = self.clone();
        out.tables[slot] = Some(Arc::new(table));
        Ok(out)
    }

    pub fn table(&self, slot: usize) -> Result<&LookupTable> {
        self.tables
            .get(slot)
            .and_then(|t| t.as_deref())
            .ok_or(Error::UnboundTable(slot))
    }

    /// The mirror inverse. Every gate in the vocabulary except RESET is an
    /// involution, so this is the reversed gate list.
    pub fn inverse(&self) -> Result<Circuit> {
        if !self.is_reset_free() {
            return invalid_arg("a circuit containing RESET has no inverse");
        }
        let mut out = self.clone();
        out.ops.reverse();
        Ok(out)
    }

    /// `self` followed by `other`. Both must have the same width; bound
    /// tables are not merged.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit> {
        if self.width != other.width {
            return invalid_arg(format!(
                "width mismatch: {} vs {}",
                self.width, other.width
            ));
        }
        let mut b = CircuitBuilder::new(self.width)?;
        b.extend(self)?;
        b.extend(other)?;
        Ok(b.build())
    }

    /// Lowers every LOAD into multi-controlled NOTs, one per set data bit
    /// of every table entry. Tables must be bound.
    pub fn expand_loads(&self) -> Result<Circuit> {
        let mut b = CircuitBuilder::new(self.width)?;
        for ins in &self.ops {
            let label = ins.block.as_deref();
            match &ins.gate {
                Gate::Load { address, targets, slot } => {
                    let table = self.table(*slot)?;
                    for (addr, &value) in table.values().iter().enumerate() {
                        for (bit, &t) in targets.iter().enumerate() {
                            if value >> bit & 1 == 0 {
                                continue;
                            }
                            let controls = address
                                .iter()
                                .enumerate()
                                .map(|(k, &w)| Control::when(w, addr >> k & 1 == 1))
                                .collect();
                            push_with(&mut b, Gate::mcx(controls, t), label)?;
                        }
                    }
                }
                g => {
                    push_with(&mut b, g.clone(), label)?;
                }
            }
        }
        Ok(b.build())
    }

    /// One line per gate: `KIND targets=[..] controls=[(idx,+|-)..] block=<label>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for ins in &self.ops {
            let _ = writeln!(out, "{} block={}", ins.gate, ins.block.as_deref().unwrap_or("-"));
        }
        out
    }
}

fn push_with(b: &mut CircuitBuilder, gate: Gate, label: Option<&str>) -> Result<()> {
    match label {
        Some(l) => b.append_labeled(gate, l)?,
        None => b.append(gate)?,
    };
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_circuit_widths() {
        let c = CircuitBuilder::new(18).unwrap().build();
        assert_eq!((c.width(), c.len()), (18, 0));
        assert_eq!(CircuitBuilder::new(1).unwrap().width(), 1);
        assert!(matches!(CircuitBuilder::new(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(CircuitBuilder::new(65), Err(Error::Unsupported(_))));
    }

    #[test]
    fn append_checks_gate() {
        let mut b = CircuitBuilder::new(2).unwrap();
        b.append(Gate::x(0)).unwrap();
        assert_eq!(b.len(), 1);

        let mut b = CircuitBuilder::new(4).unwrap();
        assert!(matches!(b.append(Gate::cx(5, 0)), Err(Error::InvalidGate(_))));
        assert!(matches!(b.append(Gate::ccx(0, 2, 2)), Err(Error::InvalidGate(_))));
        assert!(b.is_empty());
    }

    #[test]
    fn scopes_label_outermost() {
        let mut b = CircuitBuilder::new(3).unwrap();
        b.append(Gate::x(0)).unwrap();
        b.scoped("outer", |b| {
            b.append(Gate::x(1))?;
            b.scoped("inner", |b| b.append(Gate::x(2)).map(|_| ()))
        })
        .unwrap();
        let c = b.build();
        assert_eq!(
            c.dump(),
            "X targets=[0] controls=[] block=-\n\
             X targets=[1] controls=[] block=outer\n\
             X targets=[2] controls=[] block=outer\n"
        );
    }

    #[test]
    fn inverse_rejects_reset() {
        let mut b = CircuitBuilder::new(2).unwrap();
        b.append(Gate::cx(0, 1)).unwrap().append(Gate::x(0)).unwrap();
        let c = b.build();
        let inv = c.inverse().unwrap();
        assert_eq!(inv.gates().next(), Some(&Gate::x(0)));

        let mut b = CircuitBuilder::new(1).unwrap();
        b.append(Gate::reset(0)).unwrap();
        assert!(b.build().inverse().is_err());
    }

    #[test]
    fn loads_need_declared_and_fitting_tables() {
        let mut b = CircuitBuilder::new(4).unwrap();
        assert!(b.append(Gate::load(vec![0], vec![1], 0)).is_err());
        let slot = b.declare_table();
        b.append(Gate::load(vec![0, 1], vec![2, 3], slot)).unwrap();
        let c = b.build();
        assert!(matches!(c.table(slot), Err(Error::UnboundTable(0))));
        let bad = LookupTable::new(1, 2, vec![0, 3]).unwrap();
        assert!(c.bind_table(slot, bad).is_err());
        let good = LookupTable::new(2, 2, vec![0, 3, 1, 2]).unwrap();
        assert!(c.bind_table(slot, good).is_ok());
        assert!(LookupTable::new(1, 2, vec![0, 4]).is_err());
    }
}
