/* SPDX-License-Identifier: Apache-2.0 */
#include "dclab/source_terms.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "quadrature.hpp"

namespace dclab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
}  // namespace

struct SourceTerm::Impl {
    SourceFamily family = SourceFamily::Zero;
    double lambda = 0.0;
    double gamma = 0.0;
    GrowthDecl decl{};
    ScalarField weight;
    std::vector<SourceTerm> base;  // 0 or 1 entries
    std::vector<std::pair<double, SourceTerm>> terms;
    bool spatial = false;
};

SourceTerm::SourceTerm() : SourceTerm(zero()) {}

SourceTerm::SourceTerm(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

SourceTerm SourceTerm::zero()
{
    auto p = std::make_shared<Impl>();
    p->decl = {0.0, 1.0, 1.0, 1.0};
    return SourceTerm(std::move(p));
}

SourceTerm SourceTerm::power(double lambda, double gamma)
{
    require(std::isfinite(lambda) && lambda >= 0.0, ErrorCode::InvalidArgument,
            "power source needs lambda >= 0");
    require(std::isfinite(gamma) && gamma >= 0.0, ErrorCode::InvalidArgument,
            "power source needs gamma >= 0");
    auto p = std::make_shared<Impl>();
    p->family = SourceFamily::Power;
    p->lambda = lambda;
    p->gamma = gamma;
    p->decl = {gamma, 1.0, 1.0, gamma >= 3.0 ? 1.0 : kNaN};
    return SourceTerm(std::move(p));
}

SourceTerm SourceTerm::exp_minus_one()
{
    auto p = std::make_shared<Impl>();
    p->family = SourceFamily::ExpMinusOne;
    p->decl = {0.0, 1.0, kNaN, kNaN};
    return SourceTerm(std::move(p));
}

SourceTerm SourceTerm::log_one_plus_square()
{
    auto p = std::make_shared<Impl>();
    p->family = SourceFamily::LogOnePlusSquare;
    p->decl = {0.0, 1.0, kNaN, kNaN};
    return SourceTerm(std::move(p));
}

SourceTerm SourceTerm::log_one_plus_cube()
{
    auto p = std::make_shared<Impl>();
    p->family = SourceFamily::LogOnePlusCube;
    p->decl = {0.0, 1.0, kNaN, 1.0};
    return SourceTerm(std::move(p));
}

SourceTerm SourceTerm::cubic(double lambda)
{
    require(std::isfinite(lambda) && lambda >= 0.0, ErrorCode::InvalidArgument,
            "cubic source needs lambda >= 0");
    auto p = std::make_shared<Impl>();
    p->family = SourceFamily::Cubic;
    p->lambda = lambda;
    p->gamma = 3.0;
    p->decl = {3.0, 1.0, 1.0, 1.0};
    return SourceTerm(std::move(p));
}

SourceTerm SourceTerm::spatially_scaled(ScalarField weight, SourceTerm base)
{
    double wmax = 0.0;
    for (double w : weight.values()) {
        require(std::isfinite(w) && w >= 0.0, ErrorCode::InvalidArgument,
                "spatial weights must be finite and non-negative");
        wmax = std::max(wmax, w);
    }
    auto p = std::make_shared<Impl>();
    p->family = SourceFamily::SpatiallyScaled;
    p->gamma = base.gamma();
    p->decl = base.declared();
    p->weight = std::move(weight);
    p->base.push_back(std::move(base));
    p->spatial = true;
    return SourceTerm(std::move(p));
}

SourceTerm SourceTerm::linear_combination(std::vector<std::pair<double, SourceTerm>> terms)
{
    require(!terms.empty(), ErrorCode::InvalidArgument, "linear combination needs at least one term");
    auto p = std::make_shared<Impl>();
    p->family = SourceFamily::LinearCombination;
    GrowthDecl d{std::numeric_limits<double>::infinity(), 0.0, std::numeric_limits<double>::infinity(), 0.0};
    bool same_gamma = true;
    for (const auto& [w, f] : terms) {
        require(std::isfinite(w) && w >= 0.0, ErrorCode::InvalidArgument,
                "linear combination weights must be non-negative");
        const GrowthDecl& fd = f.declared();
        same_gamma = same_gamma && fd.gamma == terms.front().second.declared().gamma;
        d.gamma = std::min(d.gamma, fd.gamma);
        d.M = std::max(d.M, fd.M);
        d.N = std::min(d.N, fd.N);  // NaN propagates through std::min only on the left
        if (std::isnan(fd.N)) d.N = kNaN;
        d.M_borderline = std::isnan(fd.M_borderline) || std::isnan(d.M_borderline)
                             ? kNaN
                             : std::max(d.M_borderline, fd.M_borderline);
        p->spatial = p->spatial || f.is_spatial();
    }
    if (!same_gamma) d.N = kNaN;
    p->decl = d;
    p->gamma = d.gamma;
    p->terms = std::move(terms);
    return SourceTerm(std::move(p));
}

SourceFamily SourceTerm::family() const { return impl_->family; }
double SourceTerm::lambda() const { return impl_->lambda; }
double SourceTerm::gamma() const { return impl_->gamma; }
const GrowthDecl& SourceTerm::declared() const { return impl_->decl; }
bool SourceTerm::is_spatial() const { return impl_->spatial; }

SourceTerm SourceTerm::with_declared(GrowthDecl decl) const
{
    auto p = std::make_shared<Impl>(*impl_);
    p->decl = decl;
    return SourceTerm(std::move(p));
}

const SourceTerm& SourceTerm::base() const
{
    require(impl_->family == SourceFamily::SpatiallyScaled, ErrorCode::InvalidArgument,
            "only spatially scaled terms have a base");
    return impl_->base.front();
}

const ScalarField& SourceTerm::weight() const
{
    require(impl_->family == SourceFamily::SpatiallyScaled, ErrorCode::InvalidArgument,
            "only spatially scaled terms have a weight");
    return impl_->weight;
}

const std::vector<std::pair<double, SourceTerm>>& SourceTerm::terms() const
{
    return impl_->terms;
}

double SourceTerm::eval_unchecked(double t, NodeId node) const
{
    const Impl& p = *impl_;
    switch (p.family) {
    case SourceFamily::Zero: return 0.0;
    case SourceFamily::Power:
        if (t <= 0.0) return 0.0;
        if (p.gamma == 0.0) return p.lambda;
        if (p.gamma == 1.0) return p.lambda * t;
        if (p.gamma == 2.0) return p.lambda * t * t;
        if (p.gamma == 0.5) return p.lambda * std::sqrt(t);
        return p.lambda * std::pow(t, p.gamma);
    case SourceFamily::ExpMinusOne: return std::expm1(t);
    case SourceFamily::LogOnePlusSquare: return std::log1p(t * t);
    case SourceFamily::LogOnePlusCube: return std::log1p(t * t * t);
    case SourceFamily::Cubic: return p.lambda * t * t * t;
    case SourceFamily::SpatiallyScaled: return p.weight[node] * p.base.front().eval_unchecked(t, node);
    case SourceFamily::LinearCombination: {
        double s = 0.0;
        for (const auto& [w, f] : p.terms) s += w * f.eval_unchecked(t, node);
        return s;
    }
    }
    return 0.0;
}

double SourceTerm::operator()(double t, NodeId node) const
{
    if (!(t >= 0.0)) raise(ErrorCode::Domain, "source terms are defined for t >= 0 only");
    if (impl_->spatial)
        require(node < impl_->weight.size() || impl_->family == SourceFamily::LinearCombination,
                ErrorCode::InvalidArgument, "node outside the spatial weight field");
    return eval_unchecked(t, node);
}

double SourceTerm::operator()(double t) const
{
    require(!impl_->spatial, ErrorCode::InvalidArgument, "spatially scaled source needs a node");
    return (*this)(t, 0);
}

double SourceTerm::limit_at_zero(NodeId node) const
{
    const Impl& p = *impl_;
    switch (p.family) {
    case SourceFamily::Power: return p.gamma == 0.0 ? p.lambda : 0.0;
    case SourceFamily::SpatiallyScaled: return p.weight[node] * p.base.front().limit_at_zero(node);
    case SourceFamily::LinearCombination: {
        double s = 0.0;
        for (const auto& [w, f] : p.terms) s += w * f.limit_at_zero(node);
        return s;
    }
    default: return 0.0;
    }
}

double SourceTerm::antiderivative(double s) const
{
    require(!impl_->spatial, ErrorCode::InvalidArgument, "antiderivative of a spatial source");
    if (!(s >= 0.0)) raise(ErrorCode::Domain, "antiderivative needs s >= 0");
    const Impl& p = *impl_;
    switch (p.family) {
    case SourceFamily::Zero: return 0.0;
    case SourceFamily::Power: return p.lambda * std::pow(s, p.gamma + 1.0) / (p.gamma + 1.0);
    case SourceFamily::Cubic: return 0.25 * p.lambda * s * s * s * s;
    case SourceFamily::LinearCombination: {
        double total = 0.0;
        for (const auto& [w, f] : p.terms) total += w * f.antiderivative(s);
        return total;
    }
    default:
        // F(s) = s * int_0^1 f(s x) dx keeps full relative precision for small s.
        if (s == 0.0) return 0.0;
        return s * detail::integrate([&](double x) { return eval_unchecked(s * x, 0); }, 0.0, 1.0, 4);
    }
}

std::string SourceTerm::describe() const
{
    const Impl& p = *impl_;
    switch (p.family) {
    case SourceFamily::Zero: return "zero";
    case SourceFamily::Power: return "power(" + num(p.lambda) + ", " + num(p.gamma) + ")";
    case SourceFamily::ExpMinusOne: return "exp_minus_one";
    case SourceFamily::LogOnePlusSquare: return "log_one_plus_square";
    case SourceFamily::LogOnePlusCube: return "log_one_plus_cube";
    case SourceFamily::Cubic: return "cubic(" + num(p.lambda) + ")";
    case SourceFamily::SpatiallyScaled: return "scaled(weight, " + p.base.front().describe() + ")";
    case SourceFamily::LinearCombination: {
        std::string out;
        for (std::size_t i = 0; i < p.terms.size(); ++i) {
            if (i) out += " + ";
            out += num(p.terms[i].first) + "*" + p.terms[i].second.describe();
        }
        return out;
    }
    }
    return "zero";
}

// ---------------------------------------------------------------------------

namespace {

class SourceParser {
public:
    explicit SourceParser(const std::string& s) : s_(s) {}

    SourceTerm parse()
    {
        std::vector<std::pair<double, SourceTerm>> terms;
        bool weighted = false;
        do {
            double w = 1.0;
            skip();
            if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
                w = number();
                expect('*');
                weighted = true;
            }
            terms.emplace_back(w, atom());
            skip();
        } while (accept('+'));
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing text");
        if (terms.size() == 1 && !weighted) return terms.front().second;
        return SourceTerm::linear_combination(std::move(terms));
    }

private:
    [[noreturn]] void fail(const std::string& why) const
    {
        raise(ErrorCode::Parse, "source descriptor '" + s_ + "': " + why);
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    double number()
    {
        skip();
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("expected a number");
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    std::string ident()
    {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (start == pos_) fail("expected a source family name");
        return s_.substr(start, pos_ - start);
    }

    SourceTerm atom()
    {
        const std::string name = ident();
        if (name == "zero") return SourceTerm::zero();
        if (name == "exp_minus_one") return SourceTerm::exp_minus_one();
        if (name == "log_one_plus_square") return SourceTerm::log_one_plus_square();
        if (name == "log_one_plus_cube") return SourceTerm::log_one_plus_cube();
        if (name == "power") {
            expect('(');
            const double lambda = number();
            expect(',');
            const double gamma = number();
            expect(')');
            return SourceTerm::power(lambda, gamma);
        }
        if (name == "cubic") {
            expect('(');
            const double lambda = number();
            expect(')');
            return SourceTerm::cubic(lambda);
        }
        fail("unknown source family '" + name + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

// Evaluation "as a function of u": spatial weights are dropped, which leaves
// every growth ratio unchanged wherever the weight is positive.
double eval_in_u(const SourceTerm& f, double t)
{
    switch (f.family()) {
    case SourceFamily::SpatiallyScaled: return eval_in_u(f.base(), t);
    case SourceFamily::LinearCombination: {
        double s = 0.0;
        for (const auto& [w, g] : f.terms()) s += w * eval_in_u(g, t);
        return s;
    }
    default: return f.eval_unchecked(t, 0);
    }
}

std::vector<double> log_uniform(double lo, double hi, int n)
{
    std::vector<double> v(static_cast<std::size_t>(n));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? hi : std::exp(a + (b - a) * i / (n - 1));
    v.back() = hi;
    return v;
}

}  // namespace

SourceTerm parse_source(const std::string& text)
{
    return SourceParser(text).parse();
}

double eval(const SourceTerm& f, double t, std::optional<NodeId> node)
{
    if (f.is_spatial()) {
        require(node.has_value(), ErrorCode::InvalidArgument, "spatially scaled source needs a node");
        return f(t, *node);
    }
    return f(t);
}

const char* to_string(Condition c)
{
    switch (c) {
    case Condition::UpperGrowth: return "upper_growth";
    case Condition::LowerGrowth: return "lower_growth";
    case Condition::Borderline: return "borderline";
    case Condition::Monotone: return "monotone";
    }
    return "unknown";
}

ConditionReport check_condition(const SourceTerm& f, Condition condition, double gamma,
                                double delta_max, double t_max, int samples)
{
    require(condition != Condition::Monotone, ErrorCode::InvalidArgument,
            "use check_monotone for the monotonicity condition");
    require(delta_max > 0.0 && delta_max <= 1.0, ErrorCode::InvalidArgument, "delta_max must lie in (0, 1]");
    require(t_max > 0.0, ErrorCode::InvalidArgument, "t range must be positive");
    require(samples >= 100, ErrorCode::InvalidArgument, "at least 100 samples per axis");

    constexpr double kLow = 1e-6;
    const double g = condition == Condition::Borderline ? 3.0 : gamma;
    const bool upper = condition != Condition::LowerGrowth;

    ConditionReport rep;
    rep.condition = condition;
    rep.gamma = g;
    rep.delta_max = delta_max;
    rep.t_max = t_max;
    switch (condition) {
    case Condition::UpperGrowth: rep.declared = f.declared().M; break;
    case Condition::LowerGrowth: rep.declared = f.declared().N; break;
    default: rep.declared = f.declared().M_borderline; break;
    }

    const auto deltas = log_uniform(std::min(kLow, delta_max), delta_max, samples);
    const auto ts = log_uniform(std::min(kLow, t_max), t_max, samples);
    double best = upper ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    for (double t : ts) {
        const double ft = eval_in_u(f, t);
        for (double d : deltas) {
            const double fdt = eval_in_u(f, d * t);
            if (ft == 0.0) {
                assert(fdt == 0.0 && "monotone non-negative f cannot be positive below a zero");
                continue;
            }
            const double ratio = fdt / (std::pow(d, g) * ft);
            ++rep.ratios_used;
            if (upper ? ratio > best : ratio < best) {
                best = ratio;
                rep.worst_delta = d;
                rep.worst_t = t;
            }
        }
    }
    if (rep.ratios_used == 0) {
        rep.empirical = kNaN;
        rep.pass = true;  // vacuous: f vanishes on the sampled range
        return rep;
    }
    rep.empirical = best;
    // A few ulps of slack so that exactly homogeneous terms pass.
    constexpr double kSlack = 1e-12;
    if (std::isnan(rep.declared))
        rep.pass = false;
    else
        rep.pass = upper ? best <= rep.declared * (1.0 + kSlack) : best >= rep.declared * (1.0 - kSlack);
    return rep;
}

ConditionReport check_monotone(const SourceTerm& f, double t_max, int samples)
{
    require(t_max > 0.0, ErrorCode::InvalidArgument, "t range must be positive");
    require(samples >= 2, ErrorCode::InvalidArgument, "at least two samples");
    ConditionReport rep;
    rep.condition = Condition::Monotone;
    rep.t_max = t_max;
    rep.declared = 0.0;
    rep.pass = true;

    double run_max = -std::numeric_limits<double>::infinity();
    double run_arg = 0.0;
    double worst_drop = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = t_max * i / (samples - 1);
        const double ft = eval_in_u(f, t);
        const double drop = run_max - ft;
        if (drop > worst_drop) worst_drop = drop;
        if (drop > 1e-12 && rep.pass) {
            rep.pass = false;
            rep.worst_t = run_arg;
            rep.worst_t2 = t;
        }
        if (ft > run_max) {
            run_max = ft;
            run_arg = t;
        }
        ++rep.ratios_used;
    }
    rep.empirical = worst_drop;
    return rep;
}

}  // namespace dclab
