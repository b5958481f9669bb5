#include "conjsep/context.hpp"

#include <algorithm>

namespace conjsep {

bool GroupContext::verify_automorphism_in_context(const Automorphism& phi) const {
  if (!phi.has_inverse() || phi.rank() != alphabet().rank()) return false;
  for (int i = 0; i < phi.rank(); ++i) {
    const Word gen({i + 1});
    if (normal_form(substitute(phi.bwd, substitute(phi.fwd, gen))) != normal_form(gen)) return false;
    if (normal_form(substitute(phi.fwd, substitute(phi.bwd, gen))) != normal_form(gen)) return false;
  }
  return true;
}

namespace {

std::vector<Word> sorted_unique(std::vector<Word> ws) {
  std::sort(ws.begin(), ws.end(), [](const Word& a, const Word& b) { return a < b; });
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  return ws;
}

class FreeContext final : public GroupContext {
 public:
  explicit FreeContext(int rank) : alpha_(rank) {}
  const Alphabet& alphabet() const override { return alpha_; }
  Word normal_form(const Word& w) const override { return w; }
  Presentation presentation() const override { return {alpha_, {}}; }
  std::vector<Word> elements_of_length(int len) const override {
    return reduced_words_of_length(alpha_.rank(), len);
  }
  std::string describe() const override { return "free rank " + std::to_string(alpha_.rank()); }

 private:
  Alphabet alpha_;
};

// Common machinery for G x| Z and G^phi: alphabet = fiber letters + t.
class SdBase : public GroupContext {
 public:
  explicit SdBase(Automorphism phi)
      : phi_(std::move(phi)), alpha_(phi_.rank() + 1), fiber_rank_(phi_.rank()) {}
  const Alphabet& alphabet() const override { return alpha_; }

  SdElement fold(const Word& w) const {
    SdElement e;
    for (Letter l : w.letters()) {
      if (gen_of(l) == fiber_rank_) {
        if (is_positive(l)) {
          e.t += 1;
          e.g = phi_.apply(e.g);
        } else {
          e.t -= 1;
          e.g = phi_.apply_inverse(e.g);
        }
      } else {
        e.g = e.g * Word({l});
      }
    }
    return e;
  }

  Word unfold(long long t, const Word& g) const {
    const Letter tl = fiber_rank_ + 1;
    Word w = Word({tl}).pow(t);
    return w * g;
  }

 protected:
  Automorphism phi_;
  Alphabet alpha_;
  int fiber_rank_;
};

class SemidirectContext final : public SdBase {
 public:
  explicit SemidirectContext(Automorphism phi) : SdBase(std::move(phi)) {}
  Word normal_form(const Word& w) const override {
    const SdElement e = fold(w);
    return unfold(e.t, e.g);
  }
  Presentation presentation() const override {
    Presentation p{alpha_, {}};
    const Word t({fiber_rank_ + 1});
    for (int i = 0; i < fiber_rank_; ++i) {
      const Word gen({i + 1});
      p.relators.push_back(t.inverse() * gen * t * phi_.apply(gen).inverse());
    }
    return p;
  }
  std::vector<Word> elements_of_length(int len) const override {
    std::vector<Word> out;
    for (long long t = -len; t <= len; ++t) {
      const int rest = len - static_cast<int>(std::llabs(t));
      for (const Word& g : reduced_words_of_length(fiber_rank_, rest)) out.push_back(unfold(t, g));
    }
    return sorted_unique(std::move(out));
  }
  std::string describe() const override {
    return "semidirect rank " + std::to_string(fiber_rank_);
  }
  const Automorphism& fiber_aut() const { return phi_; }
};

class GPhiContext final : public SdBase {
 public:
  explicit GPhiContext(GPhi e) : SdBase(e.phi), data_(std::move(e)) {}
  Word normal_form(const Word& w) const override {
    const SdElement e = fold(w);
    const GPhiElement n = gphi_normalize(data_, e.t, e.g);
    return unfold(n.k, n.g);
  }
  Presentation presentation() const override {
    Presentation p{alpha_, {}};
    const Word t({fiber_rank_ + 1});
    for (int i = 0; i < fiber_rank_; ++i) {
      const Word gen({i + 1});
      p.relators.push_back(t.inverse() * gen * t * phi_.apply(gen).inverse());
    }
    p.relators.push_back(t.pow(data_.p) * data_.delta.inverse());
    return p;
  }
  std::vector<Word> elements_of_length(int len) const override {
    std::vector<Word> out;
    for (long long k = 0; k < data_.p && k <= len; ++k) {
      const int rest = len - static_cast<int>(k);
      for (const Word& g : reduced_words_of_length(fiber_rank_, rest)) {
        const GPhiElement n = gphi_normalize(data_, k, g);
        out.push_back(unfold(n.k, n.g));
      }
    }
    return sorted_unique(std::move(out));
  }
  std::string describe() const override {
    return "gphi rank " + std::to_string(fiber_rank_) + " p " + std::to_string(data_.p);
  }
  const GPhi& data() const { return data_; }

 private:
  GPhi data_;
};

class FatfContext final : public GroupContext {
 public:
  FatfContext(int rank, int dim)
      : alpha_(rank + dim), shape_{rank, dim} {}
  const Alphabet& alphabet() const override { return alpha_; }
  Word normal_form(const Word& w) const override {
    std::vector<long long> t(static_cast<size_t>(shape_.dim), 0);
    Word u;
    for (Letter l : w.letters()) {
      const int g = gen_of(l);
      if (g >= shape_.rank)
        t[static_cast<size_t>(g - shape_.rank)] += is_positive(l) ? 1 : -1;
      else
        u = u * Word({l});
    }
    Word out;
    for (int j = 0; j < shape_.dim; ++j)
      out = out * Word({shape_.rank + j + 1}).pow(t[static_cast<size_t>(j)]);
    return out * u;
  }
  Presentation presentation() const override {
    Presentation p{alpha_, {}};
    for (int j = 0; j < shape_.dim; ++j) {
      const Word tj({shape_.rank + j + 1});
      for (int k = j + 1; k < shape_.dim; ++k) {
        const Word tk({shape_.rank + k + 1});
        p.relators.push_back(tj * tk * tj.inverse() * tk.inverse());
      }
      for (int i = 0; i < shape_.rank; ++i) {
        const Word x({i + 1});
        p.relators.push_back(tj * x * tj.inverse() * x.inverse());
      }
    }
    return p;
  }
  std::vector<Word> elements_of_length(int len) const override {
    std::vector<Word> out;
    std::vector<long long> t(static_cast<size_t>(shape_.dim), 0);
    auto rec = [&](auto&& self, int j, int used) -> void {
      if (j == shape_.dim) {
        for (const Word& u : reduced_words_of_length(shape_.rank, len - used)) {
          Word w;
          for (int i = 0; i < shape_.dim; ++i)
            w = w * Word({shape_.rank + i + 1}).pow(t[static_cast<size_t>(i)]);
          out.push_back(w * u);
        }
        return;
      }
      for (long long v = -(len - used); v <= len - used; ++v) {
        t[static_cast<size_t>(j)] = v;
        self(self, j + 1, used + static_cast<int>(std::llabs(v)));
      }
    };
    rec(rec, 0, 0);
    return sorted_unique(std::move(out));
  }
  std::string describe() const override {
    return "fatf rank " + std::to_string(shape_.rank) + " dim " + std::to_string(shape_.dim);
  }
  const FatfShape& shape() const { return shape_; }

 private:
  Alphabet alpha_;
  FatfShape shape_;
};

class ExtensionContext final : public GroupContext {
 public:
  explicit ExtensionContext(ExtensionDatum d)
      : datum_(std::move(d)), alpha_(ext_alphabet_rank(datum_) > 0 ? ext_alphabet_rank(datum_) : 1) {}
  const Alphabet& alphabet() const override { return alpha_; }
  Word normal_form(const Word& w) const override {
    return ext_to_word(datum_, ext_evaluate(datum_, w));
  }
  Presentation presentation() const override {
    Presentation p{alpha_, {}};
    const int n = datum_.fiber_rank;
    for (int j = 2; j <= datum_.m; ++j) {
      const Word bj({n + j - 1});
      for (int i = 0; i < n; ++i) {
        const Word gen({i + 1});
        p.relators.push_back(bj.inverse() * gen * bj *
                             datum_.phis[static_cast<size_t>(j - 1)].apply(gen).inverse());
      }
    }
    // b_i b_j = nu(i,j) b_{sigma(i,j)}
    auto bword = [&](int i) { return i == 1 ? Word() : Word({n + i - 1}); };
    for (int i = 2; i <= datum_.m; ++i)
      for (int j = 2; j <= datum_.m; ++j) {
        const int s = datum_.sigma[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)];
        const Word rhs = datum_.nu[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] * bword(s);
        p.relators.push_back(bword(i) * bword(j) * rhs.inverse());
      }
    return p;
  }
  std::vector<Word> elements_of_length(int len) const override {
    std::vector<Word> out;
    for (int i = 1; i <= datum_.m; ++i) {
      const int cost = i == 1 ? 0 : 1;
      if (cost > len) continue;
      for (const Word& u : reduced_words_of_length(datum_.fiber_rank, len - cost)) {
        ExtElement e{u, i};
        out.push_back(ext_to_word(datum_, e));
      }
    }
    return sorted_unique(std::move(out));
  }
  std::string describe() const override {
    return "extension n " + std::to_string(datum_.fiber_rank) + " m " + std::to_string(datum_.m);
  }
  const ExtensionDatum& datum() const { return datum_; }

 private:
  ExtensionDatum datum_;
  Alphabet alpha_;
};

}  // namespace

ContextPtr make_free_context(int rank) { return std::make_shared<FreeContext>(rank); }
ContextPtr make_semidirect_context(Automorphism phi) {
  return std::make_shared<SemidirectContext>(std::move(phi));
}
ContextPtr make_gphi_context(GPhi e) { return std::make_shared<GPhiContext>(std::move(e)); }
ContextPtr make_fatf_context(int rank, int dim) {
  return std::make_shared<FatfContext>(rank, dim);
}
ContextPtr make_extension_context(ExtensionDatum d) {
  return std::make_shared<ExtensionContext>(std::move(d));
}

const Automorphism* semidirect_fiber_aut(const GroupContext& c) {
  auto p = dynamic_cast<const SemidirectContext*>(&c);
  return p ? &p->fiber_aut() : nullptr;
}
const GPhi* gphi_data(const GroupContext& c) {
  auto p = dynamic_cast<const GPhiContext*>(&c);
  return p ? &p->data() : nullptr;
}
const ExtensionDatum* extension_data(const GroupContext& c) {
  auto p = dynamic_cast<const ExtensionContext*>(&c);
  return p ? &p->datum() : nullptr;
}
const FatfShape* fatf_shape(const GroupContext& c) {
  auto p = dynamic_cast<const FatfContext*>(&c);
  return p ? &p->shape() : nullptr;
}
int free_rank(const GroupContext& c) {
  auto p = dynamic_cast<const FreeContext*>(&c);
  return p ? c.alphabet().rank() : -1;
}

SdElement sd_split(const GroupContext& c, const Word& nf) {
  const Automorphism* sd = semidirect_fiber_aut(c);
  const GPhi* gp = gphi_data(c);
  if (sd == nullptr && gp == nullptr) throw input_error("context has no t-part");
  const int fiber_rank = c.alphabet().rank() - 1;
  SdElement e;
  std::vector<Letter> fiber;
  for (Letter l : nf.letters()) {
    if (gen_of(l) == fiber_rank)
      e.t += is_positive(l) ? 1 : -1;
    else
      fiber.push_back(l);
  }
  e.g = Word(std::move(fiber));
  return e;
}

}  // namespace conjsep
