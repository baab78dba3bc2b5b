#include "cartan/rational.hpp"

#include <functional>
#include <stdexcept>

namespace cartan {

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero in Q(i)");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  mpq_class norm = o.re_ * o.re_ + o.im_ * o.im_;
  mpq_class re = (re_ * o.re_ + im_ * o.im_) / norm;
  mpq_class im = (im_ * o.re_ - re_ * o.im_) / norm;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::size_t GaussianRational::hash() const {
  std::hash<std::string> h;
  return h(re_.get_str()) * 31u ^ h(im_.get_str());
}

std::string GaussianRational::to_string() const {
  const bool has_re = sgn(re_) != 0;
  const bool has_im = sgn(im_) != 0;
  if (!has_im) return re_.get_str();
  std::string im;
  if (im_ == 1) {
    im = "I";
  } else if (im_ == -1) {
    im = "-I";
  } else {
    mpq_class mag = abs(im_);
    std::string num = mag.get_num().get_str();
    std::string den = mag.get_den().get_str();
    im = (sgn(im_) < 0 ? "-" : "") + (num == "1" ? std::string("I") : num + "*I") +
         (den == "1" ? "" : "/" + den);
  }
  if (!has_re) return im;
  std::string out = "(" + re_.get_str();
  if (im.front() != '-') out += "+";
  return out + im + ")";
}

}  // namespace cartan
