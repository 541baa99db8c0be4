"""Smoke test for the sl2lnd extension module."""
import json

import sl2lnd

p = sl2lnd.Pair.basic(3)
assert p.check_relations()
x0, x1, x2 = (p.parse(v) for v in ("x0", "x1", "x2"))
t2 = x1 * x1 - p.parse("2*x0*x2")
assert p.apply("D", t2).is_zero()
assert p.weight_of(t2) == 2
assert str(p.apply("E", x1)) == "x1"

kernel = p.kernel(2, 2)
assert [str(f) for f in kernel] == ["x1^2 - 2*x0*x2"], kernel

f = p.parse("x1*x2")
parts = p.isotypic(f)
total = None
for part in parts.values():
    total = part if total is None else total + part
assert total == f

verdict = json.loads(p.criterion(4))
assert verdict["tripleCompatible"]["status"] == "yes"
assert verdict["pairCompatible"]["status"] == "not-found-below-bound"

assert sl2lnd.cayley_sylvester(4, 4, 0) == 1
assert sl2lnd.cayley_sylvester(3, 2, 2) == 1
assert sl2lnd.golden("d3")

cm = sl2lnd.Model("cm", n=2)
assert cm.check_certificate()
assert json.loads(cm.check_quotient("groebner"))["passed"]
quiver3 = sl2lnd.Model("quiver", m=3)
assert not json.loads(quiver3.check_quotient("points"))["passed"]

print("smoke test ok")
