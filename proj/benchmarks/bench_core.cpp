#include "vir/classifier.hpp"
#include "vir/sampler.hpp"
#include "vir/subalgebra.hpp"

#include <benchmark/benchmark.h>

using namespace vir;

namespace {

const Field& q() {
  static Field f = Field::rationals();
  return f;
}

const Lattice& z() {
  static Lattice l = Lattice::make(q(), {q().one()});
  return l;
}

void BM_bracket(benchmark::State& state) {
  Sampler s(1);
  auto x = s.element(z(), false, 6, 20);
  auto y = s.element(z(), false, 6, 20);
  for (auto _ : state) benchmark::DoNotOptimize(bracket(x, y));
}
BENCHMARK(BM_bracket);

void BM_lattice_make_rank2(benchmark::State& state) {
  Field f = Field::extension({Rat(-2), Rat(0), Rat(1)});
  std::vector<Scalar> gens = {f.of(Rat(2, 3)) + f.theta(), f.of(Rat(1, 2)),
                              f.of_int(5) * f.theta(), f.one() - f.theta()};
  for (auto _ : state) benchmark::DoNotOptimize(Lattice::make(f, gens));
}
BENCHMARK(BM_lattice_make_rank2);

void BM_closure_sl2(benchmark::State& state) {
  auto lm = AlgebraElement::L(z(), q().of_int(-1), true);
  auto l0 = AlgebraElement::L(z(), q().zero(), true);
  auto lp = AlgebraElement::L(z(), q().one(), true);
  for (auto _ : state) benchmark::DoNotOptimize(closure({lm, l0, lp}));
}
BENCHMARK(BM_closure_sl2);

void BM_exp_ad_chain(benchmark::State& state) {
  auto target = AlgebraElement::L(z(), q().of_int(static_cast<long>(state.range(0))), true);
  for (auto _ : state)
    benchmark::DoNotOptimize(exp_ad_lowering(q().of(Rat(3, 7)), q().one(), target));
}
BENCHMARK(BM_exp_ad_chain)->Arg(4)->Arg(16)->Arg(64);

void BM_classify_window7(benchmark::State& state) {
  std::vector<std::vector<Int>> win;
  for (int i = -3; i <= 3; ++i) win.push_back({Int(i)});
  auto tbl = table_from_family(ModuleFamily::Aab(z(), q().of(Rat(1, 3)), q().of_int(5)),
                               {q().one(), q().of_int(2)}, win);
  Sampler s(2);
  std::map<std::vector<Int>, Scalar> gauge;
  for (const auto& k : win) gauge[k] = s.scalar(q(), true);
  auto scrambled = scramble(tbl, gauge);
  for (auto _ : state) benchmark::DoNotOptimize(classify(scrambled));
}
BENCHMARK(BM_classify_window7);

} // namespace

BENCHMARK_MAIN();
