"""Chebyshev tables for the normal CDF/quantile kernels.

Generated by tools/gen_normal_tables.py; do not edit by hand.
"""

ERFCX_TABLES = (
    (1.0, 2.0, (
        0.3314272816394519,
        -0.08500213770674318,
        0.009951127341466066,
        -0.0010810888102208162,
        0.00011023243631190834,
        -1.0636830518183701e-05,
        9.775012680243324e-07,
        -8.5979228630919e-08,
        7.2677084192055264e-09,
        -5.92354303174418e-10,
        4.668394242608136e-11,
        -3.5660310683196947e-12,
        2.647564707152534e-13,
        -1.8884364971243136e-14,
        1.5014444713978307e-15,
        -1.0573552615477681e-16,
        -4.943135847735816e-16,
        -6.582036503134856e-16,
        2.114710523095536e-17,
        1.189524669241239e-16,
        -6.040141931591625e-16,
    )),
    (2.0, 4.0, (
        0.18742956902622407,
        -0.05794652883669094,
        0.008595247387396516,
        -0.0012284613640242453,
        0.000169743666861788,
        -2.273832933701367e-05,
        2.9598443787846145e-06,
        -3.751357558003297e-07,
        4.6372828772723275e-08,
        -5.5994553570579275e-09,
        6.613160891915421e-10,
        -7.648265354376349e-11,
        8.670995138835396e-12,
        -9.644269509984886e-13,
        1.0545797039862051e-13,
        -1.1315022992638053e-14,
        9.040387486233417e-16,
        -5.035654433121246e-16,
        2.1807952269422717e-17,
        7.004978607753964e-17,
        -3.601616359647085e-16,
    )),
    (4.0, 9.0, (
        0.09248275196481319,
        -0.035985107381743195,
        0.006915538210164093,
        -0.0013133849547914422,
        0.0002466028549722347,
        -4.579397814568209e-05,
        8.413477241639312e-06,
        -1.529825559548373e-06,
        2.753852202856858e-07,
        -4.909038107174222e-08,
        8.668149658197993e-09,
        -1.516494735342988e-09,
        2.629323003283909e-10,
        -4.518915314408058e-11,
        7.70016417777944e-12,
        -1.301119839888666e-12,
        2.1813951611232804e-13,
        -3.6246971607775555e-14,
        5.9571912620240055e-15,
        -9.165373773943547e-16,
        1.7256727447977977e-16,
        7.240584943207542e-18,
        -1.0936300174636392e-16,
    )),
    (9.0, 28.0, (
        0.03543357705234433,
        -0.019499321221057304,
        0.005354902466788161,
        -0.0014677320980722398,
        0.000401523228274191,
        -0.00010963485068512414,
        2.9878995510956853e-05,
        -8.127706680233215e-06,
        2.206784353470104e-06,
        -5.980627029189556e-07,
        1.6178323756665946e-07,
        -4.368428812129288e-08,
        1.177407587371615e-08,
        -3.167692683714307e-09,
        8.507043630645583e-10,
        -2.280543376365074e-10,
        6.102763572268798e-11,
        -1.6302222904940322e-11,
        4.347184834330164e-12,
        -1.1571479885397196e-12,
        3.0749153223652573e-13,
        -8.16040290896325e-14,
        2.1567747587880605e-14,
        -5.73603664566491e-15,
        1.449916575690935e-15,
    )),
)

QUANTILE_CENTRAL = (
    (0.0, 0.180625, (
        2.873473539227901,
        0.42495236874574643,
        0.06986317633479343,
        0.014427118125591883,
        0.0033201004870131927,
        0.0008138065761201651,
        0.00020786840753599765,
        5.465725366801073e-05,
        1.468387347219638e-05,
        4.010738979231615e-06,
        1.109982423675365e-06,
        3.104897743162568e-07,
        8.762399412817153e-08,
        2.4913573426488256e-08,
        7.128724779563625e-09,
        2.0510381798752187e-09,
        5.929470248133839e-10,
        1.721425417670112e-10,
        5.0161671917630486e-11,
        1.4667040528963852e-11,
        4.298590469083454e-12,
        1.2565600733840097e-12,
        3.382173768104819e-13,
    )),
)

QUANTILE_TAIL = (
    (1.6, 2.9, (
        -2.48055270925805,
        -1.0426825801848076,
        0.012819205468197982,
        -0.001426001851304351,
        0.00016530181805573602,
        -1.9746056687762408e-05,
        2.4169523471506693e-06,
        -3.0203843997858704e-07,
        3.8425354589021334e-08,
        -4.96412476342525e-09,
        6.497679688985282e-10,
        -8.600067518030933e-11,
        1.1490402832113551e-11,
        -1.546762717907768e-12,
        2.1192709423105596e-13,
        -2.933885018987696e-14,
        3.581676018573331e-15,
        -8.881784197001252e-16,
        1.0812606848523264e-15,
        -1.1391853643979866e-15,
        -2.5100694469786146e-16,
        -1.638785725479307e-15,
        8.893851838573264e-16,
    )),
    (2.9, 7.0, (
        -6.563793744381873,
        -3.026272824388237,
        0.021240044121035775,
        -0.003748507756474986,
        0.0006819925008242222,
        -0.0001265579616831758,
        2.3822143549985243e-05,
        -4.533986839447834e-06,
        8.708770277721101e-07,
        -1.6860965207143863e-07,
        3.287768290505255e-08,
        -6.4528895649118565e-09,
        1.274188896616124e-09,
        -2.530253695454121e-10,
        5.050576845633259e-11,
        -1.0130598582236417e-11,
        2.043680780161594e-12,
        -4.1580960896681065e-13,
        8.382627925129782e-14,
        -2.19735341033811e-14,
        4.938272013532697e-15,
        1.9184653865522706e-15,
        2.149391775674303e-15,
        4.152234112098085e-15,
        -4.4186876380081235e-15,
    )),
    (7.0, 27.5, (
        -24.20162901092484,
        -14.592082868333081,
        0.026645983449604956,
        -0.007672471039061151,
        0.0022595785306403116,
        -0.000675215509104703,
        0.00020385616929786466,
        -6.202238610569566e-05,
        1.8983614322962696e-05,
        -5.838515848921589e-06,
        1.8027985431245952e-06,
        -5.585144880626558e-07,
        1.7352024961780898e-07,
        -5.404144090448426e-08,
        1.6866734853238085e-08,
        -5.274193028981245e-09,
        1.6520248635742975e-09,
        -5.182540974146832e-10,
        1.6280246484257077e-10,
        -5.1222812658124896e-11,
        1.6129817481669307e-11,
        -5.075939668586216e-12,
        1.6083312459613807e-12,
        -4.867573011324566e-13,
        1.2956746786585426e-13,
    )),
)

