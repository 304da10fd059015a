#include "ctrlpower/dataset.hpp"

namespace ctrlpower {

namespace {

// Yearly sample size and (mean, sd) of the top-1 share and of the summed
// top-2..10 shares for each cell of the listed-firm registry.
const YearTarget kPrivateMain[] = {
    {1992, 1, {0.382, 0}, {0.268, 0}},
    {1993, 28, {0.294, 0.141}, {0.263, 0.148}},
    {1994, 32, {0.300, 0.118}, {0.262, 0.141}},
    {1995, 40, {0.302, 0.110}, {0.273, 0.130}},
    {1996, 87, {0.316, 0.114}, {0.250, 0.130}},
    {1997, 114, {0.306, 0.110}, {0.257, 0.126}},
    {1998, 124, {0.298, 0.105}, {0.275, 0.122}},
    {1999, 146, {0.303, 0.105}, {0.275, 0.122}},
    {2000, 166, {0.297, 0.105}, {0.276, 0.118}},
    {2001, 184, {0.292, 0.105}, {0.271, 0.114}},
    {2002, 226, {0.287, 0.100}, {0.280, 0.118}},
    {2003, 294, {0.282, 0.089}, {0.284, 0.118}},
    {2004, 334, {0.284, 0.089}, {0.286, 0.118}},
    {2005, 337, {0.282, 0.084}, {0.278, 0.118}},
    {2006, 389, {0.273, 0.089}, {0.246, 0.118}},
    {2007, 404, {0.268, 0.100}, {0.221, 0.118}},
    {2008, 395, {0.265, 0.105}, {0.207, 0.118}},
    {2009, 402, {0.259, 0.105}, {0.184, 0.110}},
    {2010, 412, {0.254, 0.100}, {0.186, 0.114}},
    {2011, 444, {0.258, 0.105}, {0.192, 0.122}},
    {2012, 452, {0.258, 0.105}, {0.196, 0.126}},
    {2013, 465, {0.259, 0.110}, {0.204, 0.126}},
    {2014, 504, {0.264, 0.110}, {0.214, 0.126}},
    {2015, 584, {0.271, 0.110}, {0.244, 0.130}},
    {2016, 660, {0.276, 0.114}, {0.270, 0.130}},
    {2017, 827, {0.288, 0.110}, {0.299, 0.134}},
    {2018, 873, {0.288, 0.110}, {0.297, 0.130}},
    {2019, 897, {0.285, 0.109}, {0.291, 0.127}},
    {2020, 963, {0.280, 0.106}, {0.297, 0.128}},
    {2021, 1029, {0.278, 0.106}, {0.293, 0.127}},
};

const YearTarget kStateMain[] = {
    {1992, 9, {0.311, 0.084}, {0.332, 0.187}},
    {1993, 70, {0.288, 0.148}, {0.222, 0.141}},
    {1994, 94, {0.301, 0.138}, {0.210, 0.130}},
    {1995, 117, {0.318, 0.114}, {0.240, 0.134}},
    {1996, 232, {0.328, 0.105}, {0.237, 0.130}},
    {1997, 314, {0.329, 0.105}, {0.224, 0.126}},
    {1998, 357, {0.335, 0.100}, {0.223, 0.122}},
    {1999, 391, {0.332, 0.100}, {0.234, 0.126}},
    {2000, 458, {0.327, 0.100}, {0.232, 0.130}},
    {2001, 502, {0.327, 0.100}, {0.227, 0.130}},
    {2002, 514, {0.329, 0.100}, {0.232, 0.130}},
    {2003, 508, {0.333, 0.100}, {0.234, 0.130}},
    {2004, 525, {0.334, 0.095}, {0.243, 0.130}},
    {2005, 540, {0.328, 0.095}, {0.241, 0.130}},
    {2006, 644, {0.318, 0.105}, {0.205, 0.126}},
    {2007, 661, {0.316, 0.110}, {0.193, 0.126}},
    {2008, 658, {0.314, 0.110}, {0.185, 0.126}},
    {2009, 648, {0.313, 0.105}, {0.186, 0.126}},
    {2010, 661, {0.316, 0.110}, {0.184, 0.130}},
    {2011, 651, {0.315, 0.105}, {0.184, 0.130}},
    {2012, 638, {0.317, 0.105}, {0.185, 0.134}},
    {2013, 625, {0.317, 0.105}, {0.191, 0.134}},
    {2014, 636, {0.317, 0.100}, {0.191, 0.130}},
    {2015, 651, {0.319, 0.100}, {0.206, 0.130}},
    {2016, 667, {0.317, 0.100}, {0.220, 0.130}},
    {2017, 681, {0.318, 0.100}, {0.225, 0.130}},
    {2018, 675, {0.321, 0.100}, {0.230, 0.134}},
    {2019, 683, {0.320, 0.099}, {0.235, 0.136}},
    {2020, 703, {0.319, 0.101}, {0.234, 0.132}},
    {2021, 730, {0.321, 0.102}, {0.229, 0.129}},
};

const YearTarget kPrivateSmeGem[] = {
    {2004, 28, {0.318, 0.109}, {0.379, 0.109}},
    {2005, 37, {0.294, 0.093}, {0.309, 0.104}},
    {2006, 68, {0.307, 0.093}, {0.350, 0.109}},
    {2007, 127, {0.316, 0.095}, {0.359, 0.106}},
    {2008, 172, {0.326, 0.102}, {0.347, 0.106}},
    {2009, 238, {0.320, 0.102}, {0.335, 0.105}},
    {2010, 475, {0.314, 0.103}, {0.354, 0.110}},
    {2011, 670, {0.313, 0.102}, {0.350, 0.107}},
    {2012, 775, {0.311, 0.101}, {0.333, 0.112}},
    {2013, 785, {0.305, 0.102}, {0.304, 0.112}},
    {2014, 881, {0.301, 0.104}, {0.289, 0.118}},
    {2015, 1016, {0.292, 0.104}, {0.293, 0.119}},
    {2016, 1138, {0.283, 0.104}, {0.296, 0.116}},
    {2017, 1347, {0.283, 0.103}, {0.309, 0.119}},
    {2018, 1363, {0.278, 0.102}, {0.302, 0.115}},
    {2019, 1404, {0.271, 0.103}, {0.291, 0.115}},
    {2020, 1484, {0.266, 0.104}, {0.278, 0.115}},
    {2021, 1605, {0.262, 0.105}, {0.272, 0.116}},
};

const YearTarget kStateSmeGem[] = {
    {2004, 5, {0.290, 0.048}, {0.451, 0.051}},
    {2005, 10, {0.302, 0.101}, {0.283, 0.155}},
    {2006, 22, {0.343, 0.107}, {0.299, 0.119}},
    {2007, 39, {0.341, 0.109}, {0.295, 0.123}},
    {2008, 44, {0.335, 0.104}, {0.287, 0.124}},
    {2009, 53, {0.343, 0.100}, {0.274, 0.124}},
    {2010, 73, {0.325, 0.101}, {0.309, 0.144}},
    {2011, 85, {0.323, 0.096}, {0.290, 0.129}},
    {2012, 94, {0.326, 0.099}, {0.275, 0.127}},
    {2013, 96, {0.320, 0.096}, {0.267, 0.128}},
    {2014, 98, {0.322, 0.099}, {0.246, 0.121}},
    {2015, 106, {0.310, 0.099}, {0.245, 0.115}},
    {2016, 118, {0.306, 0.102}, {0.255, 0.113}},
    {2017, 126, {0.303, 0.097}, {0.268, 0.117}},
    {2018, 143, {0.296, 0.101}, {0.268, 0.114}},
    {2019, 185, {0.282, 0.097}, {0.272, 0.111}},
    {2020, 227, {0.278, 0.095}, {0.263, 0.104}},
    {2021, 269, {0.278, 0.094}, {0.254, 0.112}},
};

template <std::size_t N>
GroupTargets targets(GroupKey group, const YearTarget (&rows)[N]) {
    return {group, std::vector<YearTarget>(rows, rows + N)};
}

} // namespace

SynthConfig default_synth_config(std::uint64_t seed) {
    SynthConfig c;
    c.seed = seed;
    c.groups = {targets({Board::main, Ownership::priv}, kPrivateMain),
                targets({Board::main, Ownership::state}, kStateMain),
                targets({Board::sme_gem, Ownership::priv}, kPrivateSmeGem),
                targets({Board::sme_gem, Ownership::state}, kStateSmeGem)};
    c.meeting_ratio = Moments{0.857, 0.140};
    c.outcome_wave = reference_wave();
    return c;
}

} // namespace ctrlpower
