#include "balcast/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <string>

#include "balcast/error.hpp"

namespace balcast {

double Sampler::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

int Sampler::integer(int lo, int hi) {
  if (hi < lo) throw InvalidArgument("empty integer range");
  return lo + static_cast<int>(uniform_below(rng_, static_cast<std::uint64_t>(hi - lo) + 1));
}

double Sampler::normal() {
  // Box-Muller; one of the pair is discarded to keep the stream stateless.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::size_t Sampler::poisson(double rate) {
  if (rate <= 0.0) return 0;
  const double limit = std::exp(-rate);
  std::size_t k = 0;
  double p = uniform();
  while (p > limit) {
    ++k;
    p *= uniform();
  }
  return k;
}

std::size_t Sampler::weighted(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double x = uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (x < weights[i]) return i;
    x -= weights[i];
  }
  return weights.size() - 1;
}

namespace {

struct Merchant {
  const char* description;  // '#' becomes a store number
  const char* label;
  double log_mean;
  double log_sd;
  double weight;
};

constexpr Merchant kCardMerchants[] = {
    {"STARBUCKS STORE #", "Food and Drink - Coffee Shop", 1.6, 0.4, 1.0},
    {"MCDONALDS F#", "Food and Drink - Restaurants - Fast Food", 2.0, 0.4, 1.0},
    {"SHELL OIL #", "Travel - Gas Stations", 3.3, 0.3, 1.0},
    {"AMAZON MKTPLACE PMTS", "Shops - Digital Purchase", 3.0, 0.7, 1.0},
    {"TARGET T-#", "Shops - Department Stores", 3.4, 0.6, 1.0},
    {"WALGREENS #", "Healthcare - Pharmacies", 2.6, 0.6, 1.0},
    {"UBER TRIP HELP.UBER.COM", "Travel - Car Service - Ride Share", 2.6, 0.4, 1.0},
    {"CHIPOTLE #", "Food and Drink - Restaurants", 2.3, 0.3, 1.0},
    {"DOLLAR TREE #", "Shops - Discount Stores", 2.2, 0.5, 1.0},
    {"7-ELEVEN #", "Shops - Convenience Stores", 1.9, 0.5, 1.0},
    {"SUBWAY #", "Food and Drink - Restaurants - Fast Food", 2.1, 0.3, 1.0},
    {"CINEMARK THEATRES #", "Recreation - Arts and Entertainment", 2.9, 0.3, 1.0},
    {"HOME DEPOT #", "Shops - Hardware Store", 3.5, 0.7, 1.0},
    {"TACO BELL #", "Food and Drink - Restaurants - Fast Food", 1.9, 0.3, 1.0},
    {"CVS PHARMACY #", "Healthcare - Pharmacies", 2.4, 0.6, 1.0},
    {"DUNKIN #", "Food and Drink - Coffee Shop", 1.5, 0.4, 1.0},
    {"PANERA BREAD #", "Food and Drink - Restaurants", 2.4, 0.3, 1.0},
    {"WENDYS #", "Food and Drink - Restaurants - Fast Food", 2.0, 0.3, 1.0},
    {"BURGER KING #", "Food and Drink - Restaurants - Fast Food", 2.0, 0.3, 1.0},
    {"PIZZA HUT #", "Food and Drink - Restaurants - Pizza", 2.8, 0.3, 1.0},
    {"DOMINOS #", "Food and Drink - Restaurants - Pizza", 2.8, 0.3, 1.0},
    {"OLIVE GARDEN #", "Food and Drink - Restaurants", 3.4, 0.3, 1.0},
    {"APPLEBEES #", "Food and Drink - Restaurants", 3.3, 0.3, 1.0},
    {"PEETS COFFEE", "Food and Drink - Coffee Shop", 1.6, 0.3, 1.0},
    {"KRISPY KREME", "Food and Drink - Bakeries", 1.8, 0.3, 1.0},
    {"CHEVRON #", "Travel - Gas Stations", 3.3, 0.3, 1.0},
    {"EXXONMOBIL #", "Travel - Gas Stations", 3.3, 0.3, 1.0},
    {"LYFT RIDE", "Travel - Car Service - Ride Share", 2.5, 0.4, 1.0},
    {"PARKING METER CITY", "Travel - Parking", 1.2, 0.4, 1.0},
    {"GREYHOUND LINES", "Travel - Bus Stations", 3.5, 0.3, 1.0},
    {"WALMART SUPERCENTER", "Shops - Supermarkets and Groceries", 3.6, 0.6, 1.0},
    {"KROGER #", "Shops - Supermarkets and Groceries", 3.2, 0.5, 1.0},
    {"ALDI #", "Shops - Supermarkets and Groceries", 3.1, 0.5, 1.0},
    {"TRADER JOES #", "Shops - Supermarkets and Groceries", 3.3, 0.4, 1.0},
    {"COSTCO WHSE #", "Shops - Warehouses and Wholesale Stores", 4.2, 0.5, 1.0},
    {"MARSHALLS #", "Shops - Clothing and Accessories", 3.5, 0.5, 1.0},
    {"ROSS STORES #", "Shops - Clothing and Accessories", 3.4, 0.5, 1.0},
    {"OLD NAVY US #", "Shops - Clothing and Accessories", 3.4, 0.5, 1.0},
    {"FOOT LOCKER #", "Shops - Clothing and Accessories", 4.0, 0.4, 1.0},
    {"GAMESTOP #", "Shops - Computers and Electronics", 3.5, 0.5, 1.0},
    {"BARNES NOBLE #", "Shops - Bookstores", 2.9, 0.4, 1.0},
    {"PETSMART #", "Shops - Pets", 3.2, 0.5, 1.0},
    {"IKEA #", "Shops - Furniture and Home Decor", 4.2, 0.5, 1.0},
    {"OFFICE DEPOT #", "Shops - Office Supplies", 3.0, 0.5, 1.0},
    {"MICHAELS STORES #", "Shops - Arts and Crafts", 2.9, 0.5, 1.0},
    {"EBAY INC", "Shops - Digital Purchase", 3.3, 0.6, 1.0},
    {"ITUNES.COM BILL", "Shops - Digital Purchase", 1.5, 0.6, 1.0},
    {"GOOGLE PLAY", "Shops - Digital Purchase", 1.6, 0.6, 1.0},
    {"STEAM GAMES", "Recreation - Arts and Entertainment", 2.6, 0.5, 1.0},
    {"BOWLERO LANES", "Recreation - Arts and Entertainment", 3.1, 0.3, 1.0},
    {"REGAL CINEMAS", "Recreation - Arts and Entertainment", 2.8, 0.3, 1.0},
    {"CITY ZOO TICKETS", "Recreation - Zoo", 3.2, 0.3, 1.0},
    {"GREAT CLIPS", "Service - Personal Care", 3.0, 0.2, 1.0},
    {"SUPERCUTS", "Service - Personal Care", 3.0, 0.2, 1.0},
    {"QUICK WASH LAUNDRY", "Service - Laundry", 2.2, 0.3, 1.0},
    {"USPS POSTAGE", "Service - Shipping and Freight", 1.8, 0.6, 1.0},
    {"FEDEX OFFICE", "Service - Shipping and Freight", 2.5, 0.5, 1.0},
    {"RITE AID #", "Healthcare - Pharmacies", 2.5, 0.6, 1.0},
    {"URGENT CARE CLINIC", "Healthcare - Physicians", 4.0, 0.4, 1.0},
    {"CHURCH DONATION", "Community - Religious", 3.0, 0.4, 1.0},
    {"RED CROSS GIFT", "Community - Charities", 3.0, 0.4, 1.0},
    {"CITY LIBRARY FINES", "Community - Government", 1.0, 0.5, 1.0},
};

constexpr Merchant kLargeMerchants[] = {
    {"BEST BUY #", "Shops - Computers and Electronics", 5.8, 0.4, 1.0},
    {"MIDAS AUTO SERVICE #", "Service - Automotive", 6.0, 0.5, 1.0},
    {"CITY HOSPITAL BILLING", "Healthcare - Hospitals", 5.9, 0.5, 0.7},
    {"DELTA AIR #", "Travel - Airlines", 5.9, 0.3, 0.6},
};

constexpr const char* kEmployers[] = {"ACME CORP", "SUNRISE FOODS", "METRO TRANSIT", "BRIGHT CARE", "NOVA LOGISTICS",
                                      "GREEN VALLEY FARMS", "HARBOR HOTEL", "CITY SCHOOLS"};
constexpr const char* kLandlords[] = {"OAKWOOD APTS", "PARKSIDE PROPERTY MGMT", "MAPLE RESIDENCES", "RIVERVIEW HOMES"};

struct Occurrence {
  Date date;
  std::string description;
  std::string label;
  Cents amount;
  std::string stream;  // empty for non-recurring
  FrequencyKind frequency = FrequencyKind::Monthly;
};

std::string with_store_number(const char* pattern, int number) {
  std::string out(pattern);
  const auto pos = out.find('#');
  if (pos != std::string::npos) out.replace(pos, 1, "#" + std::to_string(number));
  return out;
}

Cents money(double amount) { return Cents::from_double(std::round(amount * 100.0) / 100.0); }

int jitter(Sampler& rng, double share, int max_shift) {
  if (!rng.chance(share)) return 0;
  const int size = max_shift == 1 ? 1 : (rng.chance(2.0 / 3.0) ? 1 : 2);
  return rng.chance(0.5) ? size : -size;
}

class AccountBuilder {
 public:
  AccountBuilder(Sampler& rng, const SyntheticOptions& opt, std::string account)
      : rng_(rng), opt_(opt), account_(std::move(account)), end_(opt.start + (opt.days - 1)) {}

  void monthly(const std::string& name, const std::string& description, const std::string& label, int day,
               double amount, double amount_sd = 0.0) {
    const Date first = Date::from_ymd(static_cast<int>(opt_.start.ymd().year()),
                                      static_cast<unsigned>(opt_.start.ymd().month()), 1);
    for (int k = 0;; ++k) {
      const Date nominal = first.add_months(k) + (day - 1);
      if (nominal > end_ + 2) break;
      plant(name, FrequencyKind::Monthly, nominal + jitter(rng_, opt_.jitter_share, 2), description, label,
            amount + amount_sd * rng_.normal());
    }
  }

  /// Jittered 1st/15th dates; amounts are attached later with plant_on.
  std::vector<Date> semimonthly_dates() {
    const Date first = Date::from_ymd(static_cast<int>(opt_.start.ymd().year()),
                                      static_cast<unsigned>(opt_.start.ymd().month()), 1);
    std::vector<Date> out;
    for (int k = 0;; ++k) {
      const Date month = first.add_months(k);
      if (month > end_ + 2) break;
      for (int day : {1, 15}) out.push_back(month + (day - 1) + jitter(rng_, opt_.jitter_share, 2));
    }
    return out;
  }

  void plant_on(const std::string& name, FrequencyKind kind, const std::vector<Date>& dates,
                const std::string& description, const std::string& label, double amount) {
    for (Date d : dates) plant(name, kind, d, description, label, amount);
  }

  void every(const std::string& name, FrequencyKind kind, const std::string& description, const std::string& label,
             double amount, double amount_sd = 0.0) {
    const int period = kind == FrequencyKind::Weekly ? 7 : 14;
    for (Date d = opt_.start + rng_.integer(0, period - 1); d <= end_ + 1; d += period) {
      plant(name, kind, d + jitter(rng_, opt_.jitter_share, 1), description, label, amount + amount_sd * rng_.normal());
    }
  }

  void one_off(Date d, const std::string& description, const std::string& label, double amount) {
    if (d < opt_.start || d > end_) return;
    events_.push_back({d, description, label, money(amount), "", FrequencyKind::Monthly});
  }

  std::vector<Occurrence>& events() { return events_; }
  Date end() const { return end_; }

 private:
  void plant(const std::string& name, FrequencyKind kind, Date d, const std::string& description,
             const std::string& label, double amount) {
    if (d < opt_.start || d > end_) return;
    events_.push_back({d, description, label, money(amount), account_ + "-" + name, kind});
  }

  Sampler& rng_;
  const SyntheticOptions& opt_;
  std::string account_;
  Date end_;
  std::vector<Occurrence> events_;
};

std::string account_name(std::size_t i) {
  std::string n = std::to_string(i + 1);
  return "A" + std::string(n.size() < 2 ? 2 - n.size() : 0, '0') + n;
}

std::string user_name(std::size_t i) {
  std::string n = std::to_string(i + 1);
  return "U" + std::string(n.size() < 2 ? 2 - n.size() : 0, '0') + n;
}

double lognormal_mean(const Merchant& m) { return std::exp(m.log_mean + 0.5 * m.log_sd * m.log_sd); }

}  // namespace

SyntheticData generate_synthetic(const SyntheticOptions& opt) {
  if (opt.accounts == 0 || opt.users == 0 || opt.users > opt.accounts) {
    throw InvalidArgument("need 1 <= users <= accounts");
  }
  if (opt.days < 60) throw InvalidArgument("synthetic ledgers need at least 60 days");
  Sampler rng(opt.seed);
  std::vector<Account> accounts;
  std::vector<Transaction> transactions;
  std::vector<RecurringLabel> labels;

  for (std::size_t a = 0; a < opt.accounts; ++a) {
    const std::string id = account_name(a);
    AccountBuilder b(rng, opt, id);
    double monthly_spend = 0.0;

    if (rng.chance(0.85)) {
      const double rent = std::round(rng.uniform(550.0, 1100.0));
      b.monthly("rent", std::string(kLandlords[rng.integer(0, 3)]) + " RENT", "Payment - Rent", rng.integer(1, 4),
                rent);
      monthly_spend += rent;
    }
    if (rng.chance(0.7)) {
      const double phone = rng.uniform(40.0, 90.0);
      b.monthly("phone", "VERIZON WIRELESS BILL", "Service - Telecommunication Services", rng.integer(5, 25), phone);
      monthly_spend += phone;
    }
    if (rng.chance(0.6)) {
      const double sub = rng.chance(0.5) ? 9.99 : 13.99;
      b.monthly("stream", "NETFLIX.COM RECURRING", "Service - Subscription", rng.integer(1, 28), sub);
      monthly_spend += sub;
    }
    if (rng.chance(0.5)) {
      const double ins = rng.uniform(60.0, 140.0);
      b.monthly("insurance", "GEICO AUTO INSURANCE", "Service - Insurance", rng.integer(1, 28), ins);
      monthly_spend += ins;
    }
    if (rng.chance(0.5)) {
      const double gym = rng.uniform(10.0, 25.0);
      b.every("gym", FrequencyKind::Biweekly, "PLANET FITNESS CLUB FEE", "Recreation - Gyms and Fitness Centers", gym);
      monthly_spend += gym * 365.25 / 12.0 / 14.0;
    } else if (rng.chance(0.4)) {
      const double care = rng.uniform(150.0, 250.0);
      b.every("childcare", FrequencyKind::Biweekly, "LITTLE STARS CHILDCARE", "Community - Child Care", care);
      monthly_spend += care * 365.25 / 12.0 / 14.0;
    }
    if (rng.chance(0.75)) {
      const double grocery = rng.uniform(45.0, 100.0);
      b.every("grocery", FrequencyKind::Weekly, "SAFEWAY #" + std::to_string(rng.integer(1000, 3999)),
              "Shops - Supermarkets and Groceries", grocery, 0.15 * grocery);
      monthly_spend += grocery * 365.25 / 12.0 / 7.0;
    }
    if (rng.chance(0.3)) {
      b.every("bus", FrequencyKind::Weekly, "METRO WEEKLY PASS", "Travel - Public Transportation Services", 25.0);
      monthly_spend += 25.0 * 365.25 / 12.0 / 7.0;
    }

    const auto paydays = b.semimonthly_dates();

    // Card spending from a personal subset of merchants.
    std::vector<std::size_t> mine;
    for (std::size_t m = 0; m < std::size(kCardMerchants); ++m) {
      if (rng.chance(0.8)) mine.push_back(m);
    }
    if (mine.empty()) mine.push_back(0);
    std::vector<double> weights;
    std::vector<int> store;
    double mean_card = 0.0;
    double weight_sum = 0.0;
    for (auto m : mine) {
      weights.push_back(kCardMerchants[m].weight);
      store.push_back(rng.integer(100, 9999));
      mean_card += kCardMerchants[m].weight * lognormal_mean(kCardMerchants[m]);
      weight_sum += kCardMerchants[m].weight;
    }
    mean_card /= weight_sum;
    const double rate = opt.noise_rate * rng.uniform(0.6, 1.4);
    // Spending clusters in the days after each payday; the multiplier averages about 1.
    std::size_t next_pay = 0;
    Date last_pay = opt.start - 7;
    for (Date d = opt.start; d <= b.end(); d += 1) {
      while (next_pay < paydays.size() && paydays[next_pay] <= d) last_pay = paydays[next_pay++];
      const double boost = 0.6 + 1.6 * std::exp(-static_cast<double>(d - last_pay) / 3.0);
      const auto n = rng.poisson(rate * boost);
      for (std::size_t k = 0; k < n; ++k) {
        const auto pick = rng.weighted(weights);
        const Merchant& m = kCardMerchants[mine[pick]];
        b.one_off(d, with_store_number(m.description, store[pick]), m.label,
                  std::exp(m.log_mean + m.log_sd * rng.normal()));
      }
      if (rng.chance(1.0 / 50.0)) {
        const auto& m = kLargeMerchants[rng.integer(0, static_cast<int>(std::size(kLargeMerchants)) - 1)];
        b.one_off(d, with_store_number(m.description, rng.integer(10, 99)), m.label,
                  std::exp(m.log_mean + m.log_sd * rng.normal()));
      }
    }
    monthly_spend += rate * mean_card * 365.25 / 12.0;

    monthly_spend += 365.25 / 12.0 / 50.0 * 420.0;
    if (opt.irregular_bill_pay && rng.chance(0.6)) {
      monthly_spend += 175.0 * 365.25 / 12.0 / 27.0;
      for (Date d = opt.start + rng.integer(0, 20); d <= b.end(); d += rng.integer(9, 45)) {
        b.one_off(d, "ONLINE BILL PAY CAPITAL ONE", "Payment - Bill Pay", rng.uniform(50.0, 300.0));
      }
    }

    // Salary sized to the expected outflow so balances hover rather than drift.
    const double paycheck = std::round(monthly_spend / 2.0 * rng.uniform(1.0, 1.06) * 100.0) / 100.0;
    b.plant_on("salary", FrequencyKind::Semimonthly, paydays,
               std::string(kEmployers[rng.integer(0, 7)]) + " PAYROLL DIR DEP", "Transfer - Payroll", -paycheck);

    auto& events = b.events();
    std::stable_sort(events.begin(), events.end(), [](const Occurrence& x, const Occurrence& y) { return x.date < y.date; });

    // Replay in date order; a debit that posts into a negative balance draws an overdraft fee,
    // at most three per calendar month.
    std::int64_t balance = Cents::from_double(std::round(rng.uniform(100.0, 1500.0))).value();
    std::vector<Occurrence> replay;
    std::chrono::year_month fee_month{};
    int fees_this_month = 0;
    for (const auto& ev : events) {
      balance -= ev.amount.value();
      replay.push_back(ev);
      const auto ymd = ev.date.ymd();
      const std::chrono::year_month month{ymd.year(), ymd.month()};
      if (month != fee_month) {
        fee_month = month;
        fees_this_month = 0;
      }
      if (ev.amount.value() > 0 && balance < 0 && fees_this_month < 3) {
        ++fees_this_month;
        replay.push_back({ev.date, "OVERDRAFT FEE", "Bank Fees - Overdraft", Cents(3500), "", FrequencyKind::Monthly});
        balance -= 3500;
      }
    }

    for (const auto& o : replay) {
      Transaction t;
      t.account = id;
      t.date = o.date;
      t.description = o.description;
      t.amount = o.amount;
      t.category = parse_category(o.label).value_or(Category::Unlabeled);
      t.category_label = o.label;
      transactions.push_back(std::move(t));
      if (!o.stream.empty()) labels.push_back({id, o.stream, o.frequency, o.date, o.description, o.amount});
    }
    const std::size_t user = std::min(a, opt.users - 1);
    accounts.push_back({id, user_name(user), AccountKind::Checking, Cents(balance), b.end()});
  }
  return {Ledger(std::move(accounts), std::move(transactions)), std::move(labels)};
}

}  // namespace balcast
