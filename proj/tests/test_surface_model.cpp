#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "test_support.hpp"

using namespace ellrank;

namespace {

PolyQ t() { return PolyQ::variable(); }

SurfaceSpec p1_spec(std::string name, PolyQ a4, PolyQ a6) {
  return SurfaceSpec{std::move(name), BaseDescriptor::p1(), BaseFunction(std::move(a4)), BaseFunction(std::move(a6)), {2, 3}, {}};
}

SurfaceSpec e1_spec() { return p1_spec("E1", t(), PolyQ{0, 0, 0, -1}); }
SurfaceSpec x3_tx_1_spec() { return p1_spec("x3+tx+1", t(), PolyQ{1}); }
SurfaceSpec elliptic_base_spec() {
  return SurfaceSpec{"eb", BaseDescriptor::elliptic(-1, 1), BaseFunction(t()), BaseFunction(PolyQ{1}), {2, 3}, {}};
}
PolyQ base_cubic() { return PolyQ{1, -1, 0, 1}; }

int degree_sum(const std::vector<PlaceLocus>& places) {
  int s = 0;
  for (const auto& p : places) s += p.contribution();
  return s;
}

}  // namespace

TEST(Invariants, KnownValues) {
  auto inv = weierstrass_invariants(t(), PolyQ{1});
  EXPECT_EQ(inv.c4, Rational(-48) * t());
  EXPECT_EQ(inv.delta, Rational(-16) * (PolyQ{27, 0, 0, 4}));
  EXPECT_EQ(inv.c6, PolyQ{-864});
  auto e1 = weierstrass_invariants(t(), PolyQ{0, 0, 0, -1});
  EXPECT_EQ(e1.delta, Rational(-16) * pow(t(), 3) * (PolyQ{4, 0, 0, 27}));
  EXPECT_THROW(weierstrass_invariants(PolyQ{}, PolyQ{}), InputError);
  EXPECT_THROW(Surface(p1_spec("zero", PolyQ{}, PolyQ{})), InputError);
}

TEST(SurfaceValidation, RejectsConstantJ) {
  // c4 = 0 gives j = 0; a4 = t^2, a6 = t^3 gives c4^3 proportional to Delta.
  EXPECT_THROW(Surface(p1_spec("j0", PolyQ{}, t())), InputError);
  EXPECT_THROW(Surface(p1_spec("jconst", pow(t(), 2), pow(t(), 3))), InputError);
  // Y^2 = X^3 + g(x) X over the elliptic base has c6 = 0, so j = 1728.
  SurfaceSpec iso{"iso", BaseDescriptor::elliptic(-1, 1), BaseFunction(base_cubic()), BaseFunction(PolyQ{}), {}, {}};
  EXPECT_THROW(Surface{iso}, InputError);
}

TEST(SurfaceValidation, RejectsBadBaseAndInputs) {
  SurfaceSpec sing{"sing", BaseDescriptor::elliptic(-3, 2), BaseFunction(t()), BaseFunction(PolyQ{1}), {}, {}};
  EXPECT_THROW(Surface{sing}, InputError);
  SurfaceSpec yp1 = e1_spec();
  yp1.a6.v = PolyQ{1};
  EXPECT_THROW(Surface{yp1}, InputError);
  SurfaceSpec comp = e1_spec();
  comp.excluded_primes.insert(9);
  EXPECT_THROW(Surface{comp}, InputError);
}

TEST(SurfaceValidation, SectionsVerifiedSymbolically) {
  SurfaceSpec s = e1_spec();
  s.sections.push_back({BaseFunction(t()), BaseFunction(t())});
  Surface ok(s);
  EXPECT_EQ(ok.section_count(), 1u);
  s.sections.push_back({BaseFunction(t()), BaseFunction(t() + PolyQ{1})});
  EXPECT_THROW(Surface{s}, InputError);
}

TEST(ConductorP1, X3PlusTXPlusOne) {
  Surface s(x3_tx_1_spec());
  auto rep = conductor_p1(s);
  EXPECT_EQ(rep.total_degree, 5);
  EXPECT_EQ(rep.geometric_bound, 1);
  ASSERT_EQ(rep.affine_places.size(), 1u);
  EXPECT_EQ(rep.affine_places[0].type, FiberType::multiplicative);
  EXPECT_EQ(rep.affine_places[0].degree, 3);
  ASSERT_TRUE(rep.infinity_place && rep.infinity_valuations);
  EXPECT_EQ(rep.infinity_place->type, FiberType::additive);
  EXPECT_EQ(rep.infinity_valuations->weight, 1);
  EXPECT_EQ(rep.infinity_valuations->v_c4, 3);
  EXPECT_EQ(rep.infinity_valuations->v_delta, 9);
}

TEST(ConductorP1, E1) {
  Surface s(e1_spec());
  auto rep = conductor_p1(s);
  EXPECT_EQ(rep.total_degree, 7);
  EXPECT_EQ(rep.geometric_bound, 3);
  int mult = 0, add = 0;
  for (const auto& pl : rep.affine_places) (pl.type == FiberType::multiplicative ? mult : add) += pl.degree;
  EXPECT_EQ(mult, 3);
  EXPECT_EQ(add, 1);
  EXPECT_EQ(rep.infinity_place->type, FiberType::additive);
}

TEST(ConductorP1, NonMinimalModelRejected) {
  // y^2 = x^3 + t x + 1 rescaled by x -> t^2 x, y -> t^3 y.
  Surface s(p1_spec("scaled", pow(t(), 5), pow(t(), 6)));
  try {
    conductor_p1(s);
    FAIL() << "expected non-minimal error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("non-minimal"), std::string::npos);
  }
}

TEST(ConductorP1, GoodAtInfinityWhenDegreesBalance) {
  // a4 = t^4 + 1, a6 = t^6 + t: the model at infinity s^4 a4, s^6 a6 is
  // y^2 = x^3 + x + 1 at s = 0, which is smooth.
  Surface s(p1_spec("balanced", PolyQ{1, 0, 0, 0, 1}, PolyQ{0, 1, 0, 0, 0, 0, 1}));
  auto rep = conductor_p1(s);
  ASSERT_TRUE(rep.infinity_place);
  EXPECT_EQ(rep.infinity_place->type, FiberType::good);
  EXPECT_EQ(rep.infinity_valuations->v_delta, 0);
}

TEST(ConductorP1, RejectsEllipticBase) { EXPECT_THROW(conductor_p1(Surface(elliptic_base_spec())), InputError); }

TEST(ConductorEllipticBase, SpecExample) {
  Surface s(elliptic_base_spec());
  auto rep = conductor_elliptic_base(s);
  EXPECT_EQ(rep.total_degree, 6);
  EXPECT_EQ(rep.geometric_bound, 6);
  ASSERT_EQ(rep.affine_places.size(), 1u);
  EXPECT_EQ(rep.affine_places[0].label, "y!=0");
  EXPECT_EQ(rep.affine_places[0].type, FiberType::multiplicative);
  EXPECT_FALSE(rep.infinity_place);
}

TEST(ConductorEllipticBase, SplitAtTwoTorsionOnRawInvariants) {
  // Y^2 = X^3 + g(x) X has constant j, so only the gcd split is checked: the
  // locus g sits at the points with y = 0 and is additive there.
  const PolyQ g = base_cubic();
  auto inv = weierstrass_invariants(g, PolyQ{});
  auto places = elliptic_base_places(g, inv.c4, inv.delta);
  ASSERT_EQ(places.size(), 1u);
  EXPECT_EQ(places[0].label, "y=0");
  EXPECT_EQ(places[0].type, FiberType::additive);
  EXPECT_EQ(places[0].degree, 3);
  EXPECT_EQ(degree_sum(places), 6);
}

TEST(ConductorEllipticBase, NonIsotrivialVariantWithTwoTorsionLocus) {
  const PolyQ g = base_cubic();
  SurfaceSpec spec{"var", BaseDescriptor::elliptic(-1, 1), BaseFunction(g), BaseFunction(g * g), {}, {}};
  auto rep = conductor_elliptic_base(Surface(spec));
  EXPECT_EQ(rep.total_degree, 12);
  int at_y0 = 0;
  for (const auto& pl : rep.affine_places)
    if (pl.label == "y=0") {
      EXPECT_EQ(pl.type, FiberType::additive);
      at_y0 += pl.contribution();
    }
  EXPECT_EQ(at_y0, 6);
}

TEST(ConductorEllipticBase, YDependentRejected) {
  SurfaceSpec spec = elliptic_base_spec();
  spec.a6 = BaseFunction(PolyQ{}, PolyQ{1});
  Surface s(spec);
  try {
    conductor_elliptic_base(s);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(std::string(e.what()), "exact conductor unsupported for y-dependent coefficients");
  }
}

TEST(Pullback, KnownValues) {
  auto rep = conductor(Surface(elliptic_base_spec()));
  EXPECT_EQ(pullback_conductor(rep, 2).total_degree, 24);
  EXPECT_EQ(pullback_conductor(rep, 2).geometric_bound, 24);
  EXPECT_EQ(pullback_conductor(rep, 1).total_degree, 6);
  EXPECT_THROW(pullback_conductor(rep, 0), InputError);
  EXPECT_THROW(pullback_conductor(conductor(Surface(e1_spec())), 2), InputError);
}

TEST(ExcludedPrimes, AutoExtension) {
  Surface eb(elliptic_base_spec());
  auto listed = eb.exclusions().listed_primes();
  EXPECT_EQ(listed, (std::vector<u64>{2, 3, 23}));
  EXPECT_TRUE(eb.excludes(23));
  EXPECT_FALSE(eb.excludes(5));  // conductor-unstable, reported only
  auto rep = conductor(eb);
  bool found = false;
  for (const auto& u : rep.unstable) found |= u.value == -11735;
  EXPECT_TRUE(found);

  Surface half(p1_spec("half", PolyQ{Rational(1, 7), 1}, PolyQ{1}));
  EXPECT_TRUE(half.excludes(7));
}

TEST(SurfaceIo, RoundTripAndErrors) {
  SurfaceSpec spec = elliptic_base_spec();
  spec.sections.push_back({BaseFunction(PolyQ{}), BaseFunction(PolyQ{1})});
  auto back = surface_spec_from_json(surface_spec_to_json(spec));
  EXPECT_EQ(Surface(back).hash(), Surface(spec).hash());
  EXPECT_EQ(back.a4, spec.a4);
  EXPECT_EQ(back.sections.size(), 1u);

  EXPECT_THROW(surface_spec_from_json(nlohmann::json::parse(R"({"a4": ["1"]})")), InputError);
  EXPECT_THROW(surface_spec_from_json(nlohmann::json::parse(R"({"base": {"kind": "torus"}, "a4": [], "a6": []})")), InputError);
  EXPECT_THROW(surface_spec_from_json(nlohmann::json::parse(R"({"base": {"kind": "p1"}, "a4": ["x"], "a6": []})")), InputError);
  EXPECT_THROW(load_surface_spec("/nonexistent/spec.json"), InputError);
}

TEST(SurfaceIo, HashSeparatesSurfaces) {
  EXPECT_NE(Surface(e1_spec()).hash(), Surface(x3_tx_1_spec()).hash());
  EXPECT_EQ(Surface(e1_spec()).hash(), Surface(e1_spec()).hash());
}

TEST(BadFiberCensus, ConsistentOnSampleSurfaces) {
  for (const auto& spec : {e1_spec(), x3_tx_1_spec(), elliptic_base_spec()}) {
    Surface s(spec);
    auto rep = conductor(s);
    auto census = bad_fiber_census(s, rep, 500);
    EXPECT_GE(census.consistent_fraction(), 0.9) << spec.name;
  }
}

// ---------------------------------------------------------------------------
// Properties over random P^1 surfaces.

TEST(SurfaceProperties, ConductorBookkeeping) {
  gen::Rng rng(41);
  int accepted = 0;
  for (int i = 0; i < 300 && accepted < 80; ++i) {
    PolyQ a4 = rng.poly(3, 5), a6 = rng.poly(4, 5);
    std::optional<Surface> s;
    std::optional<ConductorReport> rep;
    try {
      s.emplace(p1_spec("rand", a4, a6));
      rep = conductor_p1(*s);
    } catch (const InputError&) {
      continue;
    }
    ++accepted;
    EXPECT_EQ(rep->total_degree, recompute_total_degree(*rep));
    EXPECT_EQ(rep->geometric_bound, rep->total_degree - 4);

    // Split is a partition of rad(Delta).
    auto inv = weierstrass_invariants(*s);
    int affine_degree = 0;
    for (const auto& pl : rep->affine_places) affine_degree += pl.degree;
    EXPECT_EQ(affine_degree, radical(inv.delta).degree());

    // Nonconstant j: c4^3 - j Delta != 0 for the only candidate j.
    PolyQ c4_cubed = pow(inv.c4, 3);
    if (c4_cubed.degree() == inv.delta.degree()) {
      Rational j = c4_cubed.leading() / inv.delta.leading();
      EXPECT_FALSE((c4_cubed - j * inv.delta).is_zero());
    }
  }
  EXPECT_GE(accepted, 40);
}
