from fractions import Fraction

from polyfiber import univariate as uv


def F(*vals):
    return uv.upoly([Fraction(v) for v in vals])


class TestBasics:
    def test_divmod(self):
        q, r = uv.udivmod(F(-1, 0, 1), F(-1, 1))  # (u^2-1)/(u-1)
        assert q == F(1, 1) and not r

    def test_gcd(self):
        g = uv.ugcd(F(-1, 0, 1), F(1, 1))
        assert g == F(1, 1)

    def test_squarefree_decomposition(self):
        # (u+1)^2 (u-2)
        p = uv.umul(uv.umul(F(1, 1), F(1, 1)), F(-2, 1))
        decomp = uv.squarefree_decomposition(p)
        assert [(g, k) for g, k in decomp] == [(F(-2, 1), 1), (F(1, 1), 2)]


class TestSturm:
    def test_count_all(self):
        assert uv.count_real_roots(F(-2, 0, 1)) == 2      # u^2 - 2
        assert uv.count_real_roots(F(1, 0, 1)) == 0       # u^2 + 1
        assert uv.count_real_roots(F(0, -1, 0, 1)) == 3   # u^3 - u

    def test_count_interval(self):
        p = F(0, -1, 0, 1)  # roots -1, 0, 1
        assert uv.count_real_roots(p, Fraction(-1, 2), Fraction(2)) == 2

    def test_multiple_roots_counted_once(self):
        p = uv.umul(F(1, 1), F(1, 1))
        assert uv.count_real_roots(p) == 1

    def test_isolation(self):
        p = F(0, -1, 0, 1)
        ivs = uv.isolate_real_roots(p)
        assert len(ivs) == 3
        mids = [iv.midpoint() for iv in ivs]
        assert mids == sorted(mids)
        for iv, root in zip(ivs, (-1, 0, 1)):
            assert iv.lo < root <= iv.hi

    def test_refine(self):
        p = F(-2, 0, 1)
        iv = [i for i in uv.isolate_real_roots(p) if i.midpoint() > 0][0]
        iv = uv.refine_interval(p, iv, Fraction(1, 1024))
        assert iv.width() <= Fraction(1, 1024)
        assert iv.lo < Fraction(1414214, 1000000) < iv.hi or iv.lo < Fraction(14142135, 10000000)


class TestRationalRoots:
    def test_with_multiplicity(self):
        # (2u-1)^2 (u+3)
        p = uv.umul(uv.umul(F(-1, 2), F(-1, 2)), F(3, 1))
        roots = uv.rational_roots(p)
        assert (Fraction(-3), 1) in roots and (Fraction(1, 2), 2) in roots

    def test_no_rational(self):
        assert uv.rational_roots(F(-2, 0, 1)) == []


class TestDescriptors:
    def test_mixed(self):
        # (u-1)(u^2+1)(u^2-2)
        p = uv.umul(uv.umul(F(-1, 1), F(1, 0, 1)), F(-2, 0, 1))
        descs = uv.root_descriptors(p)
        assert sum(m for _, m in descs) == 5
        reals = [d for d, _ in descs if d.is_real]
        assert len(reals) == 3
        rationals = [d for d, _ in descs if d.kind == "rational"]
        assert len(rationals) == 1 and rationals[0].value == 1

    def test_min_root_lower_bound(self):
        p = F(-2, 0, 1)
        b = uv.min_root_lower_bound(p)
        assert 0 < b and b * b <= 2
