"""Decimal expansions of the Euler-Mascheroni constant and its exponential.

Both literals are truncated (not rounded) after ``DIGITS`` fractional digits,
so the true value lies in ``[literal, literal + 10**-DIGITS]``.
"""

DIGITS = 1300

EULER_GAMMA = (
    "0."
    "5772156649015328606065120900824024310421593359399235988057672348848677"
    "2677766467093694706329174674951463144724980708248096050401448654283622"
    "4173997644923536253500333742937337737673942792595258247094916008735203"
    "9481656708532331517766115286211995015079847937450857057400299213547861"
    "4669402960432542151905877553526733139925401296742051375413954911168510"
    "2807984234877587205038431093997361372553060889331267600172479537836759"
    "2713515772261027349291394079843010341777177808815495706610750101619166"
    "3340152278935867965497252036212879226555953669628176388792726801324310"
    "1047650596370394739495763890657296792960100901512519595092224350140934"
    "9871228247949747195646976318506676129063811051824197444867836380861749"
    "4551698927923018773910729457815543160050021828440960537724342032854783"
    "6701517739439870030237033951832869000155819398804270741154222781971652"
    "3011073565833967348717650491941812300040654693142999297779569303100503"
    "0863034185698032310836916400258929708909854868257773642882539549258736"
    "2959613329857473930237343884707037028441292016641785024873337908056275"
    "4998434590761643167103146710722370021810745044418664759134803669025532"
    "4586254422253451813879124345735013612977822782881489459098638460062931"
    "6947188714958752549236649352047324364109726827616087759508809512620840"
    "4544477992299157248292516251278427659657"
)

EXP_EULER_GAMMA = (
    "1."
    "7810724179901979852365041031071795491696452143034302053576658765128410"
    "7681358829370757421648841828033482224522514574200105579457424819650088"
    "1568575126450011584595726740358281967942909506915784452444104950624749"
    "4646739544224939206129736671899296118178171652864420491963881484122168"
    "5979211079334642491962473558822697919096702915015433548608693369337054"
    "6945590162327435295325983725766057036185991522439177800246866066358611"
    "7287927837192311367757393941040997516402036473484352386382021226506642"
    "4769625002147263444914484348856424178974964672272861347388162990813399"
    "8637601650951225930470345744755950618891448569923966073975162156342628"
    "6549551373909258141962310785511202080191889749032762449465399591732002"
    "3702346972595868267504864024051730817333687405009498105976458687029389"
    "6367065248715697709906547424211801204145061066518815890360582394179851"
    "9634236370134771763646188686856689181798821908601430001906672557460571"
    "2722169911418933648461722485988806975526316560646488540282278640017071"
    "4829524143677069517465752235987166746273979360542550651924388928322749"
    "1500350801831900327651318757803069558009536174449567011815778572529582"
    "5116341511343042572164294069368769188902869226111280339714697009619248"
    "1544422780670347367789806799770569507766490455401888270873790952892147"
    "0852564851683119463337125595229976321326"
)
